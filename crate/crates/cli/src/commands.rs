use mersexp::{
    all_carry_solutions, bl_inverse, canonical_form, carry_constraints_check, catalog_lookup,
    cyclotomic_canonical, ext_euclid_inverse, gold_inverse, gold_invertible, kasami_inverse,
    kasami_invertible, modulus, solve_carries, verify_congruence, BitSequence, ExponentFamily,
    FieldContext, InverseResult, PowerMap, RMatrix, Residue, SignedPowerForm,
};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{matrix_json, matrix_lines, residue_json, OutputDocument};
use crate::{numbers, Failure, FamilyArg};

type Outcome = Result<(OutputDocument, u8), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Exactly `n` binary digits of `v < 2^n`, MSB first.
fn raw_bits(v: &BigUint, n: u32) -> String {
    format!("0b{:0>width$}", v.to_str_radix(2), width = n as usize)
}

fn family_name(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::Gold => "gold",
        FamilyArg::Kasami => "kasami",
        FamilyArg::Bl => "bl",
        FamilyArg::Raw => "raw",
    }
}

fn describe_closed_form(doc: &mut OutputDocument, res: &InverseResult) {
    let r = res.r_matrix.r();
    doc.result = json!({
        "family": res.family.name(),
        "parameter": r,
        "n": res.n,
        "inverse": residue_json(&res.inverse),
        "weight": res.weight,
        "formula_weight": res.formula_weight,
        "e": res.e,
        "r_matrix": matrix_json(&res.r_matrix),
        "carry_matrix": matrix_json(&res.carry_matrix),
        "carries": res.carries.as_slice(),
    });
    doc.case_label = Some(res.label.to_string());
    doc.warnings.extend(res.warnings.iter().cloned());
    doc.headline = res.inverse.to_string();
    doc.line(format!("family:   {}", res.family));
    doc.line(format!("n:        {}", res.n));
    doc.line(format!("inverse:  {}", res.inverse));
    doc.line(format!("bits:     {}", res.inverse.to_binary_string()));
    doc.line(format!(
        "weight:   {} (formula {})",
        res.weight, res.formula_weight
    ));
    doc.line(format!("case:     {}", res.label));
    doc.line(format!(
        "r-matrix (r={r}, {}x{}):",
        res.r_matrix.rows(),
        res.r_matrix.cols()
    ));
    doc.text.extend(matrix_lines(&res.r_matrix));
    doc.line("carry matrix:");
    doc.text.extend(matrix_lines(&res.carry_matrix));
}

pub fn inverse(family: FamilyArg, r: Option<u64>, n: Option<u32>, l: Option<BigUint>) -> Outcome {
    let mut doc = OutputDocument::new("inverse");
    doc.input("family", family_name(family));
    let need_r = || r.ok_or_else(|| usage(format!("inverse {} needs --r", family_name(family))));
    let need_n = || n.ok_or_else(|| usage(format!("inverse {} needs --n", family_name(family))));
    if family != FamilyArg::Raw && l.is_some() {
        return Err(usage("--l only applies to raw"));
    }
    match family {
        FamilyArg::Gold | FamilyArg::Kasami => {
            let (r, n) = (need_r()?, need_n()?);
            doc.input("r", r).input("n", n);
            let res = if family == FamilyArg::Gold {
                gold_inverse(r, n)?
            } else {
                kasami_inverse(r, n)?
            };
            describe_closed_form(&mut doc, &res);
        }
        FamilyArg::Bl => {
            let r = need_r()?;
            doc.input("r", r);
            if let Some(n) = n {
                doc.input("n", n);
                if u64::from(n) != 4 * r {
                    return Err(usage(format!(
                        "Bracken-Leander fixes n = 4r = {}, got --n {n}",
                        4 * r
                    )));
                }
            }
            describe_closed_form(&mut doc, &bl_inverse(r)?);
        }
        FamilyArg::Raw => {
            let l = l.ok_or_else(|| usage("inverse raw needs --l"))?;
            let n = need_n()?;
            doc.input("l", l.to_string()).input("n", n);
            let inv = ext_euclid_inverse(&l, n)?;
            let mut result = json!({
                "family": "raw",
                "n": n,
                "inverse": residue_json(&inv),
                "weight": inv.weight(),
            });
            doc.headline = inv.to_string();
            doc.line(format!("l:        {l}"));
            doc.line(format!("n:        {n}"));
            doc.line(format!("inverse:  {inv}"));
            doc.line(format!("bits:     {}", inv.to_binary_string()));
            doc.line(format!("weight:   {}", inv.weight()));
            if let Some(r) = r {
                doc.input("r", r);
                let m = mersexp::to_r_matrix(&inv.to_bits(), r)?;
                result["r_matrix"] = matrix_json(&m);
                doc.line(format!("r-matrix (r={r}, {}x{}):", m.rows(), m.cols()));
                doc.text.extend(matrix_lines(&m));
            }
            doc.result = result;
        }
    }
    Ok((doc, 0))
}

/// Splits `gold3`, `kasami12`, `bl1`, `raw0x1f` into a family; anything
/// else is read as a signed power form.
fn parse_lspec(spec: &str) -> Result<(SignedPowerForm, Option<u64>, String), Failure> {
    let spec = spec.trim();
    let lower = spec.to_ascii_lowercase();
    for (prefix, make) in [
        (
            "kasami",
            ExponentFamily::Kasami as fn(u64) -> ExponentFamily,
        ),
        ("gold", ExponentFamily::Gold),
        ("bl", ExponentFamily::BrackenLeander),
    ] {
        if let Some(rest) = lower.strip_prefix(prefix) {
            let r = numbers::parse_u64(rest).map_err(usage)?;
            let f = make(r);
            return Ok((canonical_form(&f)?, Some(r), f.to_string()));
        }
    }
    if let Some(rest) = lower.strip_prefix("raw") {
        let l = numbers::parse_big(rest).map_err(usage)?;
        if l.is_zero() {
            return Err(usage("raw exponent must be >= 1"));
        }
        return Ok((SignedPowerForm::binary(&l)?, None, format!("raw({l})")));
    }
    let form: SignedPowerForm = spec.parse()?;
    let name = form.to_string();
    Ok((form, None, name))
}

/// A word strictly below `2^n - 1`.
fn word(name: &str, v: &BigUint, n: u32) -> Result<BitSequence, Failure> {
    if *v >= modulus(n) {
        return Err(usage(format!("--{name} must be below 2^{n}-1, got {v}")));
    }
    Ok(Residue::new(n, v.clone())?.to_bits())
}

pub fn carry(spec: &str, a: &BigUint, s: &BigUint, n: u32, r: Option<u64>) -> Outcome {
    let mut doc = OutputDocument::new("carry");
    doc.input("l", spec)
        .input("a", a.to_string())
        .input("s", s.to_string())
        .input("n", n);
    if n < 2 {
        return Err(usage(format!("n must be >= 2, got {n}")));
    }
    let (form, family_r, name) = parse_lspec(spec)?;
    let r = match r {
        Some(r) => {
            doc.input("r", r);
            r
        }
        None => family_r.unwrap_or(1),
    };
    if r == 0 {
        return Err(usage("--r must be >= 1"));
    }
    let (a_bits, s_bits) = (word("a", a, n)?, word("s", s, n)?);
    let c = verify_congruence(&form, &a_bits, &s_bits)?;
    let solutions = all_carry_solutions(&form, &a_bits, &s_bits)?.len();
    let report = carry_constraints_check(&c, &form, r, &a_bits, &s_bits)?;
    let m = RMatrix::from_sequence(c.as_slice(), r)?;

    doc.result = json!({
        "form": form.to_string(),
        "t_plus": form.t_plus(),
        "t_minus": form.t_minus(),
        "carries": c.as_slice(),
        "carry_matrix": matrix_json(&m),
        "r": r,
        "weight": c.weight(),
        "solutions": solutions,
        "checks": {
            "pairwise_bound": report.pairwise_bound,
            "weight_bound": report.weight_bound,
            "weight_identity": report.weight_identity,
        },
    });
    let joined: Vec<String> = c.as_slice().iter().map(i64::to_string).collect();
    doc.headline = joined.join(" ");
    doc.line(format!("l:        {name} = {form}"));
    doc.line(format!(
        "carry range: [{}, {}]",
        form.t_minus(),
        form.t_plus() - 1
    ));
    doc.line(format!(
        "carries (c_0 .. c_{}): {}",
        n - 1,
        joined.join(" ")
    ));
    doc.line(format!("weight:   {}", c.weight()));
    doc.line(format!("carry matrix (r={r}, {}x{}):", m.rows(), m.cols()));
    doc.text.extend(matrix_lines(&m));
    let yn = |b: bool| if b { "holds" } else { "does not hold" };
    doc.line(format!(
        "wt(c) + wt(s) = (sum t)*wt(a):  {}",
        yn(report.weight_identity)
    ));
    doc.line("bounds guaranteed for Kasami forms with s = 1:");
    doc.line(format!(
        "  c_i + c_(i-r) in {{-1,0,1}}:     {}",
        yn(report.pairwise_bound)
    ));
    doc.line(format!(
        "  2|wt(c)| <= n:                 {}",
        yn(report.weight_bound)
    ));
    Ok((doc, 0))
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Gold,
    Kasami,
    Bl,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Gold => "gold",
            Family::Kasami => "kasami",
            Family::Bl => "bl",
        }
    }

    fn exponent(self, r: u64) -> BigUint {
        let one = BigUint::one();
        match self {
            Family::Gold => (&one << r) + 1u32,
            Family::Kasami => (&one << (2 * r)) - (&one << r) + 1u32,
            Family::Bl => (&one << (2 * r)) + (&one << r) + 1u32,
        }
    }
}

struct AuditRow {
    family: Family,
    r: u64,
    n: u32,
    label: Option<String>,
    weight: Option<u64>,
    problems: Vec<String>,
}

fn audit_one(family: Family, r: u64, n: u32) -> AuditRow {
    let oracle = ext_euclid_inverse(&family.exponent(r), n);
    let claimed = match family {
        Family::Gold => gold_invertible(r, n),
        Family::Kasami => kasami_invertible(r, n),
        Family::Bl => true,
    };
    let mut row = AuditRow {
        family,
        r,
        n,
        label: None,
        weight: None,
        problems: Vec::new(),
    };
    if claimed != oracle.is_ok() {
        row.problems.push(format!(
            "invertibility predicate says {claimed}, gcd disagrees"
        ));
        return row;
    }
    if !claimed {
        return row;
    }
    let produced = match family {
        Family::Gold => gold_inverse(r, n),
        Family::Kasami => kasami_inverse(r, n),
        Family::Bl => bl_inverse(r),
    };
    let res = match produced {
        Ok(res) => res,
        Err(e) => {
            row.problems.push(e.to_string());
            return row;
        }
    };
    row.label = Some(res.label.to_string());
    row.weight = Some(res.weight);
    let want = oracle.expect("checked above");
    if res.inverse != want {
        row.problems.push(format!(
            "closed form {} differs from reference {want}",
            res.inverse
        ));
    }
    if res.weight != res.formula_weight || res.weight != want.weight() {
        row.problems.push(format!(
            "weight {} vs formula {}",
            res.weight, res.formula_weight
        ));
    }
    let one = Residue::new(n, 1u32).expect("n >= 2").to_bits();
    match canonical_form(&res.family).and_then(|f| solve_carries(&f, &res.inverse.to_bits(), &one))
    {
        Ok(c) if c == res.carries => {}
        Ok(_) => row
            .problems
            .push("solved carries differ from the attached certificate".into()),
        Err(e) => row.problems.push(format!("carry solve: {e}")),
    }
    row
}

pub fn audit(n_min: u32, n_max: u32) -> Outcome {
    let mut doc = OutputDocument::new("audit");
    doc.input("n_min", n_min).input("n_max", n_max);
    if n_min < 2 || n_min > n_max {
        return Err(usage(format!(
            "need 2 <= n-min <= n-max, got {n_min}..{n_max}"
        )));
    }
    let mut jobs = Vec::new();
    for n in n_min..=n_max {
        let n64 = u64::from(n);
        for r in 1..n64 {
            jobs.push((Family::Gold, r, n));
        }
        if n >= 4 {
            for r in 1..n64 {
                jobs.push((Family::Kasami, r, n));
            }
        }
        if n % 4 == 0 && (n / 4) % 2 == 1 {
            jobs.push((Family::Bl, n64 / 4, n));
        }
    }
    // invertible instances, plus any where the predicate and gcd disagree
    let rows: Vec<AuditRow> = jobs
        .into_par_iter()
        .map(|(f, r, n)| audit_one(f, r, n))
        .filter(|row| row.label.is_some() || !row.problems.is_empty())
        .collect();

    let failed = rows.iter().filter(|row| !row.problems.is_empty()).count();
    let count = |f: &str| rows.iter().filter(|row| row.family.name() == f).count();
    let instances: Vec<Value> = rows
        .iter()
        .map(|row| {
            json!({
                "family": row.family.name(),
                "r": row.r,
                "n": row.n,
                "case_label": row.label,
                "weight": row.weight,
                "pass": row.problems.is_empty(),
                "problems": row.problems,
            })
        })
        .collect();
    doc.result = json!({
        "checked": rows.len(),
        "passed": rows.len() - failed,
        "failed": failed,
        "by_family": { "gold": count("gold"), "kasami": count("kasami"), "bl": count("bl") },
        "instances": instances,
    });
    for row in &rows {
        let status = if row.problems.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let label = row.label.as_deref().unwrap_or("-");
        let mut line = format!(
            "{status} {} r={} n={} {label}",
            row.family.name(),
            row.r,
            row.n
        );
        if !row.problems.is_empty() {
            line.push_str(&format!(": {}", row.problems.join("; ")));
        }
        doc.line(line);
    }
    let summary = format!(
        "{} checked, {} passed, {failed} failed",
        rows.len(),
        rows.len() - failed
    );
    doc.line(summary.clone());
    doc.headline = summary;
    Ok((doc, if failed == 0 { 0 } else { 5 }))
}

/// The analysis cap: `MERSEXP_MAX_N` if set, else 24.
fn analysis_cap() -> Result<u32, Failure> {
    match std::env::var("MERSEXP_MAX_N") {
        Ok(v) => {
            let cap = numbers::parse_u32(&v).map_err(|e| usage(format!("MERSEXP_MAX_N: {e}")))?;
            if cap > mersexp::sbox::HARD_MAX_N {
                return Err(usage(format!(
                    "MERSEXP_MAX_N may not exceed {}",
                    mersexp::sbox::HARD_MAX_N
                )));
            }
            Ok(cap)
        }
        Err(_) => Ok(mersexp::sbox::DEFAULT_MAX_N),
    }
}

pub fn analyze(l: &BigUint, n: u32, poly: Option<u64>) -> Outcome {
    let mut doc = OutputDocument::new("analyze");
    doc.input("l", l.to_string()).input("n", n);
    if let Some(p) = poly {
        doc.input("poly", format!("{p:#x}"));
    }
    let cap = analysis_cap()?;
    if n > cap || n < 2 {
        return Err(usage(format!("analysis needs 2 <= n <= {cap}, got {n}")));
    }
    let m = modulus(n);
    if l.is_zero() || *l > m {
        return Err(usage(format!("l must lie in [1, 2^{n}-1], got {l}")));
    }
    let ctx = match poly {
        Some(p) => FieldContext::with_polynomial(n, p)?,
        None => FieldContext::with_limit(n, cap)?,
    };
    let map = PowerMap::new(l, ctx)?;
    let uniformity = map.differential_uniformity();
    let degree = l.count_ones();
    let canonical = if *l == m {
        json!({ "value": l.to_string(), "bits": raw_bits(l, n) })
    } else {
        residue_json(&cyclotomic_canonical(&Residue::new(n, l.clone())?))
    };
    let permutation = l.gcd(&m).is_one();
    doc.result = json!({
        "exponent": { "value": l.to_string(), "bits": raw_bits(l, n) },
        "polynomial": format!("{:#x}", ctx.polynomial()),
        "uniformity": uniformity,
        "apn": uniformity == 2,
        "degree": degree,
        "permutation": permutation,
        "canonical": canonical,
    });
    doc.headline = format!("{uniformity}");
    doc.line(format!("l:           {l} ({})", raw_bits(l, n)));
    doc.line(format!(
        "field:       GF(2^{n}) mod {:#x}",
        ctx.polynomial()
    ));
    doc.line(format!("uniformity:  {uniformity}"));
    doc.line(format!("apn:         {}", uniformity == 2));
    doc.line(format!("degree:      {degree}"));
    doc.line(format!("permutation: {permutation}"));
    doc.line(format!(
        "canonical:   {}",
        doc.result["canonical"]["value"]
            .as_str()
            .unwrap_or_default()
    ));
    Ok((doc, 0))
}

pub fn catalog(n: u32) -> Outcome {
    let mut doc = OutputDocument::new("catalog");
    doc.input("n", n);
    if n < 2 {
        return Err(usage(format!("n must be >= 2, got {n}")));
    }
    let entries = catalog_lookup(n)?;
    let mut rows = Vec::new();
    doc.line(format!(
        "{:<16} {:>6} {:>12} {:>7} {:>6} {:>10} {:>12}  conditions",
        "family", "param", "exponent", "degree", "table", "invertible", "inverse"
    ));
    for e in &entries {
        let param = match e.family {
            ExponentFamily::Gold(p)
            | ExponentFamily::Kasami(p)
            | ExponentFamily::BrackenLeander(p)
            | ExponentFamily::Dobbertin(p)
            | ExponentFamily::Welch(p)
            | ExponentFamily::Niho(p) => Some(p),
            _ => None,
        };
        let closed = if !e.invertible {
            None
        } else {
            match e.family {
                ExponentFamily::Gold(r) => Some(gold_inverse(r, n)?),
                ExponentFamily::Kasami(r) if n >= 4 => Some(kasami_inverse(r, n)?),
                ExponentFamily::BrackenLeander(r) => Some(bl_inverse(r)?),
                _ => None,
            }
        };
        rows.push(json!({
            "family": e.family.name(),
            "parameter": param,
            "exponent": residue_json(&e.exponent),
            "conditions": e.conditions,
            "claimed_degree": e.claimed_degree,
            "degree": e.exponent.weight(),
            "claimed_uniformity": e.claimed_uniformity,
            "source_table": e.source_table,
            "invertible": e.invertible,
            "inverse": closed.as_ref().map(|c| residue_json(&c.inverse)),
            "inverse_case": closed.as_ref().map(|c| c.label.to_string()),
        }));
        let inv = closed
            .as_ref()
            .map_or("-".to_string(), |c| c.inverse.to_string());
        let param = param.map_or("-".to_string(), |p| p.to_string());
        doc.line(format!(
            "{:<16} {:>6} {:>12} {:>7} {:>6} {:>10} {:>12}  {}",
            e.family.name(),
            param,
            e.exponent.to_string(),
            e.claimed_degree,
            e.source_table,
            e.invertible,
            inv,
            e.conditions
        ));
    }
    if entries.is_empty() {
        doc.text = vec![format!("no catalog rows for n={n}")];
    }
    doc.headline = format!("{} entries", entries.len());
    doc.result = json!({ "entries": rows });
    Ok((doc, 0))
}
