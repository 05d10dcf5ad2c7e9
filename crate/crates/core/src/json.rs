//! JSON forms of morphisms and directive sequences.
//!
//! ```json
//! {"alphabet": ["a","b"], "images": {"a": "ab", "b": "a"}}
//! {"alphabet": [...], "prefix": [<morphism>...], "period": [<morphism>...]}
//! {"alphabet": ["1","2","3"], "generator": {"name": "sec65",
//!   "a": {"kind": "geometric", "base": 2, "shift": 1}, "horizon": 40}}
//! ```
//! A finite sequence uses `"truncated": [<morphism>...]` instead of
//! `prefix`/`period`.
//!
//! Dimension-group descriptors:
//! ```json
//! {"kind": "descriptor", "d": 3, "provenance": "...", "extreme_measures": [
//!   {"kind": "rational", "values": ["1/2", ...]},
//!   {"kind": "quadratic", "radicand": 5, "values": [{"a": "3/2", "b": "-1/2"}, ...]},
//!   {"kind": "boxed", "values": [{"lo": "p/q", "hi": "p/q"}, ...]}]}
//! ```
//! Every number is an exact fraction string; `"decimal"` fields, when
//! present, are for readers and ignored on input.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dimgroup::{Descriptor, MeasureVector};
use crate::directive::{DirectiveSequence, IntSequence};
use crate::error::{invalid, Result};
use crate::numeric::{decimal_string, fraction_string, parse_rational, Interval, Rational};
use crate::quadratic::QuadSurd;
use crate::words::{Alphabet, Morphism};

#[derive(Debug, Serialize, Deserialize)]
struct MorphismJson {
    alphabet: Vec<String>,
    images: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SeqJson {
    Geometric { base: u64, shift: i64 },
    List { values: Vec<Value> },
}

#[derive(Debug, Serialize, Deserialize)]
struct GeneratorJson {
    name: String,
    a: SeqJson,
    horizon: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct SequenceJson {
    alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prefix: Option<Vec<MorphismJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    period: Option<Vec<MorphismJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncated: Option<Vec<MorphismJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generator: Option<GeneratorJson>,
}

fn parse_alphabet(letters: &[String]) -> Result<Alphabet> {
    let mut chars = Vec::with_capacity(letters.len());
    for l in letters {
        let mut it = l.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => chars.push(c),
            _ => {
                return Err(invalid(format!(
                    "alphabet entry {l:?} is not a single letter"
                )))
            }
        }
    }
    Alphabet::new(chars)
}

fn letters_of(a: &Alphabet) -> Vec<String> {
    a.letters().iter().map(char::to_string).collect()
}

fn morphism_in(m: MorphismJson, expected: Option<&Alphabet>) -> Result<Morphism> {
    let alphabet = parse_alphabet(&m.alphabet)?;
    if let Some(e) = expected {
        if *e != alphabet {
            return Err(invalid(
                "morphism alphabet differs from the sequence alphabet",
            ));
        }
    }
    let mut map = HashMap::new();
    for (k, v) in m.images {
        let mut it = k.chars();
        let c = match (it.next(), it.next()) {
            (Some(c), None) => c,
            _ => return Err(invalid(format!("image key {k:?} is not a single letter"))),
        };
        map.insert(c, v);
    }
    Morphism::from_map(&alphabet, &map)
}

fn morphism_out(m: &Morphism) -> MorphismJson {
    let images = m
        .source()
        .letters()
        .iter()
        .zip(m.image_strings())
        .map(|(c, s)| (c.to_string(), s))
        .collect();
    MorphismJson {
        alphabet: letters_of(m.source()),
        images,
    }
}

pub fn morphism_to_value(m: &Morphism) -> Value {
    serde_json::to_value(morphism_out(m)).expect("serializable")
}

pub fn morphism_from_str(s: &str) -> Result<Morphism> {
    let m: MorphismJson =
        serde_json::from_str(s).map_err(|e| invalid(format!("morphism JSON: {e}")))?;
    morphism_in(m, None)
}

fn big_from_value(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(BigInt::from)
            .ok_or_else(|| invalid(format!("sequence value {n} is not a non-negative integer"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| invalid(format!("sequence value {s:?} is not an integer"))),
        other => Err(invalid(format!("sequence value {other} is not an integer"))),
    }
}

pub fn sequence_to_value(ds: &DirectiveSequence) -> Value {
    let alphabet = letters_of(ds.alphabet());
    let json = if let Some((a, horizon)) = ds.two_measure_parts() {
        let a = match a {
            IntSequence::Geometric { base, shift } => SeqJson::Geometric {
                base: *base,
                shift: *shift,
            },
            IntSequence::List(v) => SeqJson::List {
                values: v.iter().map(|x| Value::String(x.to_string())).collect(),
            },
        };
        SequenceJson {
            alphabet,
            prefix: None,
            period: None,
            truncated: None,
            generator: Some(GeneratorJson {
                name: "sec65".into(),
                a,
                horizon,
            }),
        }
    } else if let Some(levels) = ds.truncated_levels() {
        SequenceJson {
            alphabet,
            prefix: None,
            period: None,
            truncated: Some(levels.iter().map(morphism_out).collect()),
            generator: None,
        }
    } else {
        let (prefix, period) = ds.periodic_parts().expect("eventually periodic");
        SequenceJson {
            alphabet,
            prefix: Some(prefix.iter().map(morphism_out).collect()),
            period: Some(period.iter().map(morphism_out).collect()),
            truncated: None,
            generator: None,
        }
    };
    serde_json::to_value(json).expect("serializable")
}

pub fn sequence_from_value(v: Value) -> Result<DirectiveSequence> {
    let j: SequenceJson =
        serde_json::from_value(v).map_err(|e| invalid(format!("directive sequence JSON: {e}")))?;
    let alphabet = parse_alphabet(&j.alphabet)?;
    if let Some(g) = j.generator {
        if g.name != "sec65" {
            return Err(invalid(format!("unknown generator {:?}", g.name)));
        }
        if j.prefix.is_some() || j.period.is_some() || j.truncated.is_some() {
            return Err(invalid("a generator excludes explicit morphisms"));
        }
        let a = match g.a {
            SeqJson::Geometric { base, shift } => IntSequence::Geometric { base, shift },
            SeqJson::List { values } => {
                IntSequence::List(values.iter().map(big_from_value).collect::<Result<_>>()?)
            }
        };
        let ds = DirectiveSequence::two_measure(a, g.horizon)?;
        if *ds.alphabet() != alphabet {
            return Err(invalid(
                "the sec65 generator lives on the alphabet [\"1\",\"2\",\"3\"]",
            ));
        }
        return Ok(ds);
    }
    let convert = |ms: Vec<MorphismJson>| -> Result<Vec<Morphism>> {
        ms.into_iter()
            .map(|m| morphism_in(m, Some(&alphabet)))
            .collect()
    };
    if let Some(levels) = j.truncated {
        if j.prefix.is_some() || j.period.is_some() {
            return Err(invalid("a truncated sequence excludes prefix/period"));
        }
        return DirectiveSequence::truncated(alphabet.clone(), convert(levels)?);
    }
    let prefix = convert(j.prefix.unwrap_or_default())?;
    let period = convert(j.period.ok_or_else(|| invalid("missing \"period\""))?)?;
    DirectiveSequence::periodic(alphabet.clone(), prefix, period)
}

pub fn sequence_from_str(s: &str) -> Result<DirectiveSequence> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| invalid(format!("directive sequence JSON: {e}")))?;
    sequence_from_value(v)
}

/// `{"exact": "p/q", "decimal": "..."}`.
pub fn number_value(x: &Rational) -> Value {
    serde_json::json!({"exact": fraction_string(x), "decimal": decimal_string(x, 20)})
}

fn rational_field(v: &Value, key: &str) -> Result<Rational> {
    let s = v
        .get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| invalid(format!("missing fraction string {key:?}")))?;
    parse_rational(s)
}

pub fn measure_to_value(m: &MeasureVector) -> Value {
    match m {
        MeasureVector::Rational(v) => serde_json::json!({
            "kind": "rational",
            "values": v.iter().map(fraction_string).collect::<Vec<_>>(),
            "decimal": v.iter().map(|x| decimal_string(x, 20)).collect::<Vec<_>>(),
        }),
        MeasureVector::Quadratic(v) => serde_json::json!({
            "kind": "quadratic",
            "radicand": v.first().map_or(1, QuadSurd::radicand),
            "values": v.iter().map(|q| serde_json::json!({
                "a": fraction_string(&q.a),
                "b": fraction_string(&q.b),
                "text": q.to_string(),
            })).collect::<Vec<_>>(),
            "decimal": v.iter().map(|q| decimal_string(&q.enclosure(30).lo, 20)).collect::<Vec<_>>(),
        }),
        MeasureVector::Boxed(v) => serde_json::json!({
            "kind": "boxed",
            "values": v.iter().map(|i| serde_json::json!({
                "lo": fraction_string(&i.lo),
                "hi": fraction_string(&i.hi),
            })).collect::<Vec<_>>(),
            "decimal": v.iter().map(|i| decimal_string(&i.midpoint(), 20)).collect::<Vec<_>>(),
        }),
    }
}

pub fn measure_from_value(v: &Value) -> Result<MeasureVector> {
    let values = v
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("measure vector needs \"values\""))?;
    match v.get("kind").and_then(Value::as_str) {
        Some("rational") => Ok(MeasureVector::Rational(
            values
                .iter()
                .map(|x| {
                    x.as_str()
                        .ok_or_else(|| invalid("expected a fraction string"))
                        .and_then(parse_rational)
                })
                .collect::<Result<_>>()?,
        )),
        Some("quadratic") => {
            let radicand = v
                .get("radicand")
                .and_then(Value::as_u64)
                .filter(|&r| r > 1)
                .ok_or_else(|| invalid("quadratic measure needs an integer \"radicand\" > 1"))?;
            if crate::quadratic::square_free_part(radicand).1 != 1 {
                return Err(invalid("the radicand must be square-free"));
            }
            Ok(MeasureVector::Quadratic(
                values
                    .iter()
                    .map(|x| {
                        Ok(QuadSurd::new(
                            rational_field(x, "a")?,
                            rational_field(x, "b")?,
                            radicand,
                        ))
                    })
                    .collect::<Result<_>>()?,
            ))
        }
        Some("boxed") => Ok(MeasureVector::Boxed(
            values
                .iter()
                .map(|x| {
                    let (lo, hi) = (rational_field(x, "lo")?, rational_field(x, "hi")?);
                    if lo > hi {
                        return Err(invalid("interval with lo > hi"));
                    }
                    Ok(Interval::new(lo, hi))
                })
                .collect::<Result<_>>()?,
        )),
        other => Err(invalid(format!("unknown measure kind {other:?}"))),
    }
}

pub fn descriptor_to_value(desc: &Descriptor) -> Value {
    serde_json::json!({
        "kind": "descriptor",
        "d": desc.d,
        "provenance": desc.provenance,
        "extreme_measures": desc.extreme_measures.iter().map(measure_to_value).collect::<Vec<_>>(),
    })
}

pub fn descriptor_from_value(v: &Value) -> Result<Descriptor> {
    if v.get("kind").and_then(Value::as_str) != Some("descriptor") {
        return Err(invalid(
            "not a descriptor (expected \"kind\": \"descriptor\")",
        ));
    }
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid("descriptor needs \"d\""))? as usize;
    let measures = v
        .get("extreme_measures")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("descriptor needs \"extreme_measures\""))?
        .iter()
        .map(measure_from_value)
        .collect::<Result<Vec<_>>>()?;
    let provenance = v
        .get("provenance")
        .and_then(Value::as_str)
        .unwrap_or("file");
    Descriptor::new(d, measures, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{brun_truncated, fibonacci, sec65_default};

    #[test]
    fn spec_forms_parse() {
        let m = morphism_from_str(r#"{"alphabet": ["a","b"], "images": {"a": "ab", "b": "a"}}"#)
            .unwrap();
        assert_eq!(m.image_strings(), vec!["ab", "a"]);
        let ds = sequence_from_str(
            r#"{"alphabet": ["1","2","3"], "generator": {"name": "sec65", "a": {"kind": "geometric", "base": 2, "shift": 1}, "horizon": 40}}"#,
        )
        .unwrap();
        assert_eq!(ds, sec65_default());
        assert!(morphism_from_str(r#"{"alphabet": ["a","b"], "images": {"a": "ab"}}"#).is_err());
        assert!(sequence_from_str(r#"{"alphabet": ["a"], "period": []}"#).is_err());
    }

    #[test]
    fn unicode_letters() {
        let m = morphism_from_str(r#"{"alphabet": ["α","β"], "images": {"α": "αβ", "β": "α"}}"#)
            .unwrap();
        assert_eq!(m.image_strings(), vec!["αβ", "α"]);
    }

    #[test]
    fn descriptors_round_trip() {
        let d = crate::families::ex63_descriptor();
        let back = descriptor_from_value(&descriptor_to_value(&d)).unwrap();
        assert_eq!(back, d);
        let t = crate::dimgroup::descriptor(&crate::families::tribonacci(), &Default::default())
            .unwrap();
        assert_eq!(descriptor_from_value(&descriptor_to_value(&t)).unwrap(), t);
        assert!(
            descriptor_from_value(&serde_json::json!({"kind": "descriptor", "d": 2,
            "extreme_measures": [{"kind": "rational", "values": ["1/2", "1/3"]}]}))
            .is_err()
        );
    }

    #[test]
    fn round_trips() {
        for ds in [
            fibonacci(),
            sec65_default(),
            brun_truncated(3, &[(0, 1), (1, 2), (2, 0)]).unwrap(),
        ] {
            let v = sequence_to_value(&ds);
            assert_eq!(sequence_from_value(v).unwrap(), ds);
        }
    }
}
