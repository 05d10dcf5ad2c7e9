//! JSON renderings of library results. Numbers are exact fraction strings
//! with a decimal rendering alongside; integers that fit in 64 bits are
//! plain JSON integers, larger ones are strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use sadic::balance::{BalanceReport, BalanceVerdict, GrowthClass, ProfileReport, WitnessPair};
use sadic::dimgroup::{InfinitesimalLattice, LatticeMethod, SoeVerdict};
use sadic::directive::{Primitivity, SequenceCertificate};
use sadic::free_group::{BasisReport, BasisVerdict};
use sadic::json::number_value;
use sadic::language::{DendricVerdict, ExtensionGraph};
use sadic::measures::{ProbeReport, ProbeVerdict};
use sadic::numeric::{Interval, Rational};
use sadic::returns::ReturnWords;
use sadic::{Alphabet, IntegerMatrix};

pub fn num(x: &Rational) -> Value {
    number_value(x)
}

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn matrix(m: &IntegerMatrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| ints(r)).collect())
}

pub fn interval(i: &Interval) -> Value {
    json!({"lo": num(&i.lo), "hi": num(&i.hi)})
}

pub fn intervals(v: &[Interval]) -> Value {
    Value::Array(v.iter().map(interval).collect())
}

pub fn certificate(a: &Alphabet, c: &SequenceCertificate) -> Value {
    let letter = |x: Option<u8>| x.map(|i| a.letter(i).to_string());
    let primitive = match &c.primitive {
        Primitivity::Primitive {
            window,
            witness,
            valid_up_to,
        } => json!({
            "status": "primitive",
            "window": window,
            "witness": [witness.0, witness.1],
            "valid_up_to": valid_up_to,
        }),
        Primitivity::NotPrimitive { start, reason } => {
            json!({"status": "not_primitive", "from_level": start, "reason": reason})
        }
        Primitivity::Inconclusive { reason } => json!({"status": "inconclusive", "reason": reason}),
    };
    json!({
        "primitive": primitive,
        "unimodular": c.unimodular,
        "non_unimodular_level": c.non_unimodular_level,
        "left_proper": c.left_proper,
        "right_proper": c.right_proper,
        "proper": c.proper,
        "left_proper_block": c.left_proper_block,
        "proper_block": c.proper_block,
        "levels": c.levels.iter().map(|l| json!({"level": l.level, "left": letter(l.left), "right": letter(l.right)})).collect::<Vec<_>>(),
        "growth": {
            "depth": c.growth.depth,
            "min_length": int(&c.growth.min_length),
            "max_length": int(&c.growth.max_length),
        },
        "valid_up_to": c.valid_up_to,
        "primitive_unimodular_properizable": c.is_primitive_unimodular_properizable(),
    })
}

pub fn extension_graph(a: &Alphabet, g: &ExtensionGraph) -> Value {
    let letters = |v: &[u8]| {
        v.iter()
            .map(|&c| a.letter(c).to_string())
            .collect::<Vec<_>>()
    };
    json!({
        "word": a.render(&g.word),
        "left": letters(&g.left),
        "right": letters(&g.right),
        "edges": g.edges.iter().map(|&(x, y)| [a.letter(x).to_string(), a.letter(y).to_string()]).collect::<Vec<_>>(),
        "tree": g.is_tree(),
    })
}

pub fn dendric(a: &Alphabet, v: &DendricVerdict) -> Value {
    json!({
        "dendric": v.dendric,
        "up_to": v.up_to,
        "bispecials_checked": v.bispecials_checked,
        "witness": v.witness.as_ref().map(|g| extension_graph(a, g)),
    })
}

pub fn returns(a: &Alphabet, r: &ReturnWords, basis: &BasisReport) -> Value {
    json!({
        "word": a.render(&r.word),
        "return_words": r.returns.iter().map(|w| a.render(w)).collect::<Vec<_>>(),
        "count": r.returns.len(),
        "depth": r.depth,
        "occurrences": r.occurrences,
        "free_basis": {
            "verdict": match basis.verdict {
                BasisVerdict::Basis => "basis",
                BasisVerdict::NotBasis => "not_basis",
                BasisVerdict::Inconclusive => "inconclusive",
            },
            "abelian_det": basis.abelian_det.as_ref().map(int),
            "reason": basis.reason,
        },
    })
}

pub fn probe(p: &ProbeReport) -> Value {
    let verdict = match &p.verdict {
        ProbeVerdict::Unique { depth, enclosure } => json!({
            "kind": "unique",
            "depth": depth,
            "enclosure": intervals(enclosure),
        }),
        ProbeVerdict::Multiple {
            clusters,
            from_depth,
            to_depth,
            min_gap,
        } => json!({
            "kind": "multiple",
            "from_depth": from_depth,
            "to_depth": to_depth,
            "min_gap": num(min_gap),
            "clusters": clusters.iter().map(|c| json!({
                "columns": c.columns,
                "enclosure": intervals(&c.enclosure),
            })).collect::<Vec<_>>(),
        }),
        ProbeVerdict::Inconclusive { reason } => json!({"kind": "inconclusive", "reason": reason}),
    };
    json!({
        "d": p.d,
        "max_depth": p.max_depth,
        "eps": num(&p.eps),
        "verdict": verdict,
        "diameters": p.diameters.iter().map(num).collect::<Vec<_>>(),
    })
}

pub fn lattice(l: &InfinitesimalLattice) -> Value {
    let method = match &l.method {
        LatticeMethod::Exact => json!({"kind": "exact"}),
        LatticeMethod::IntegerRelation { scale, bound } => json!({
            "kind": "integer_relation",
            "scale": int(scale),
            "bound": int(bound),
        }),
    };
    json!({
        "basis": l.basis.iter().map(|b| ints(b)).collect::<Vec<_>>(),
        "rank": l.basis.len(),
        "trivial": l.is_trivial(),
        "method": method,
    })
}

pub fn soe(v: &SoeVerdict) -> Value {
    match v {
        SoeVerdict::Witness { matrix: m, exact } => json!({
            "kind": "witness",
            "matrix": matrix(m),
            "det": int(&m.det()),
            "row_sums": ints(&m.row_sums()),
            "exact": exact,
        }),
        SoeVerdict::NoWitnessWithinBound { bound } => {
            json!({"kind": "no_witness_within_bound", "bound": bound})
        }
        SoeVerdict::NotSoe { reason } => json!({"kind": "not_soe", "reason": reason}),
    }
}

fn witness_pair(a: &Alphabet, w: &WitnessPair) -> Value {
    json!({
        "length": w.length,
        "high": a.render(&w.high),
        "high_count": w.high_count,
        "low": a.render(&w.low),
        "low_count": w.low_count,
        "gap": w.gap(),
    })
}

fn growth(g: &GrowthClass) -> Value {
    match g {
        GrowthClass::Bounded { bound } => json!({"kind": "bounded", "bound": bound}),
        GrowthClass::Growing { slope_per_doubling } => {
            json!({"kind": "growing", "slope_per_doubling": slope_per_doubling})
        }
        GrowthClass::Inconclusive { slope_per_doubling } => {
            json!({"kind": "inconclusive", "slope_per_doubling": slope_per_doubling})
        }
    }
}

fn profile_report(a: &Alphabet, r: &ProfileReport) -> Value {
    json!({
        "target": a.render(&r.profile.target),
        "growth": growth(&r.growth),
        "max": r.profile.last(),
        "values": r.profile.values,
        "witness": r.profile.witness.as_ref().map(|w| witness_pair(a, w)),
    })
}

pub fn balance_verdict(a: &Alphabet, v: &BalanceVerdict) -> Value {
    match v {
        BalanceVerdict::NotBalanced { reason, witness } => json!({
            "kind": "not_balanced",
            "reason": reason,
            "witness": witness.as_ref().map(|w| witness_pair(a, w)),
        }),
        BalanceVerdict::EmpiricallyBalanced { up_to } => {
            json!({"kind": "empirically_balanced", "up_to": up_to})
        }
        BalanceVerdict::Inconclusive { reason } => {
            json!({"kind": "inconclusive", "reason": reason})
        }
    }
}

pub fn balance(a: &Alphabet, r: &BalanceReport) -> Value {
    json!({
        "d": r.d,
        "up_to": r.up_to,
        "rule": {
            "samples": r.rule.samples,
            "min_slope": r.rule.min_slope,
            "min_value": r.rule.min_value,
        },
        "hypotheses": {"holds": r.hypotheses.holds, "source": r.hypotheses.source},
        "frequency_rank": r.frequency_rank,
        "rank_method": r.rank_method,
        "letter_verdict": balance_verdict(a, &r.letter_verdict),
        "factor_verdict": balance_verdict(a, &r.factor_verdict),
        "letters": r.letters.iter().map(|p| profile_report(a, p)).collect::<Vec<_>>(),
        "factors": r.factors.iter().map(|p| profile_report(a, p)).collect::<Vec<_>>(),
    })
}
