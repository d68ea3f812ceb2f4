//! Modular add-with-carry.
//!
//! For `l = Σ t_j 2^j` with small integer coefficients, `s ≡ l·a (mod 2^n-1)`
//! holds exactly when there is a cyclic carry word `c` with entries in
//! `[t_-, t_+ - 1]` such that
//!
//! ```text
//! 2c_i - c_{i-1} + s_i = Σ_j t_j a_{i-j}      (indices mod n)
//! ```
//!
//! and that word is unique. This module finds it, checks it, and reports the
//! weight constraints it obeys.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::residue::{mul_mod, BitSequence, ExponentFamily, Residue};

/// `Σ t_j 2^j` with nonzero integer coefficients.
///
/// Exponents are kept as given (not reduced mod `n`), so `K_r` with `2r ≡ 0`
/// still has `t_+ = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPowerForm {
    terms: BTreeMap<u64, i64>,
}

impl SignedPowerForm {
    pub fn new(terms: impl IntoIterator<Item = (u64, i64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (j, t) in terms {
            *map.entry(j).or_insert(0i64) += t;
        }
        map.retain(|_, t| *t != 0);
        let form = Self { terms: map };
        if form.terms.is_empty() {
            return Err(Error::InvalidParameter(
                "signed power form has no terms".into(),
            ));
        }
        if form.t_plus() < 1 {
            return Err(Error::InvalidParameter(
                "signed power form needs a positive term".into(),
            ));
        }
        if !form.value().is_positive() {
            return Err(Error::InvalidParameter(
                "signed power form must be positive".into(),
            ));
        }
        Ok(form)
    }

    /// Plain binary expansion of `l`.
    pub fn binary(l: &BigUint) -> Result<Self> {
        Self::new((0..l.bits()).filter(|&i| l.bit(i)).map(|i| (i, 1)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.terms.iter().map(|(&j, &t)| (j, t))
    }

    pub fn t_plus(&self) -> i64 {
        self.terms.values().filter(|t| **t > 0).sum()
    }

    pub fn t_minus(&self) -> i64 {
        self.terms.values().filter(|t| **t < 0).sum()
    }

    /// Sum of all coefficients.
    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn value(&self) -> BigInt {
        self.terms.iter().map(|(&j, &t)| BigInt::from(t) << j).sum()
    }

    /// The form's value reduced modulo `2^n - 1`.
    pub fn residue(&self, n: u32) -> Result<Residue> {
        let mut acc = BigInt::zero();
        for (&j, &t) in &self.terms {
            acc += BigInt::from(t) * (BigInt::one() << (j % u64::from(n)));
        }
        Residue::from_signed(n, &acc)
    }

    /// Allowed carry values `t_- ..= t_+ - 1`.
    pub fn carry_range(&self) -> std::ops::RangeInclusive<i64> {
        self.t_minus()..=self.t_plus() - 1
    }

    /// `Σ_j t_j a_{i-j}` for every `i`.
    fn convolve(&self, a: &BitSequence) -> Vec<i64> {
        let n = a.len();
        let mut out = vec![0i64; n];
        for (&j, &t) in &self.terms {
            let off = (j % n as u64) as usize;
            for (i, o) in out.iter_mut().enumerate() {
                *o += t * i64::from(a.as_slice()[(i + n - off) % n]);
            }
        }
        out
    }
}

impl fmt::Display for SignedPowerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&j, &t) in self.terms.iter().rev() {
            let sign = if t < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = t.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}2^{j}")?;
            } else {
                write!(f, "{sign}{mag}*2^{j}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Parses the [`Display`](fmt::Display) syntax: terms `[c*]2^j` or a bare
/// integer `c` (meaning `c*2^0`), joined by `+` and `-`, e.g. `2^6-2^3+1`.
impl std::str::FromStr for SignedPowerForm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidParameter(format!("signed power form {text:?}: {why}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'-' => (-1, &rest[1..]),
                b'+' => (1, &rest[1..]),
                _ if terms.is_empty() => (1, rest),
                _ => return Err(bad("missing operator")),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (coef, exp) = match term.split_once("2^") {
                Some((c, j)) => {
                    let coef = match c {
                        "" => 1,
                        c => c
                            .strip_suffix('*')
                            .ok_or_else(|| bad("expected '*' before 2^"))?
                            .parse::<i64>()
                            .map_err(|_| bad("bad coefficient"))?,
                    };
                    (coef, j.parse::<u64>().map_err(|_| bad("bad exponent"))?)
                }
                None => (term.parse::<i64>().map_err(|_| bad("bad term"))?, 0),
            };
            terms.push((exp, sign * coef));
        }
        Self::new(terms)
    }
}

/// A cyclic carry word, index 0 least significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CarrySequence {
    carries: Vec<i64>,
}

impl CarrySequence {
    pub fn new(carries: Vec<i64>) -> Self {
        Self { carries }
    }

    pub fn n(&self) -> u32 {
        self.carries.len() as u32
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.carries
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.carries
    }

    pub fn get(&self, i: i64) -> i64 {
        self.carries[i.rem_euclid(self.carries.len() as i64) as usize]
    }

    /// Sum of the entries (may be negative).
    pub fn weight(&self) -> i64 {
        self.carries.iter().sum()
    }
}

/// The low-coefficient form used for each family.
///
/// Gold is `2^r + 2^0`, Kasami `2^{2r} - 2^r + 2^0`, Bracken-Leander
/// `2^{2r} + 2^r + 2^0`; a raw exponent uses its binary expansion.
pub fn canonical_form(f: &ExponentFamily) -> Result<SignedPowerForm> {
    match f {
        ExponentFamily::Gold(r) | ExponentFamily::Kasami(r) | ExponentFamily::BrackenLeander(r) => {
            if *r == 0 {
                return Err(Error::InvalidParameter(
                    "family parameter must be >= 1".into(),
                ));
            }
            // n is irrelevant for these three
            SignedPowerForm::new(f.signed_terms(2).expect("parametric family"))
        }
        ExponentFamily::Raw(l) => SignedPowerForm::binary(l),
        other => Err(Error::InvalidParameter(format!(
            "no carry form for the {} family",
            other.name()
        ))),
    }
}

fn check_lengths(a: &BitSequence, s: &BitSequence) -> Result<()> {
    if a.n() != s.n() {
        return Err(Error::ModulusMismatch {
            left: a.n(),
            right: s.n(),
        });
    }
    Ok(())
}

/// Propagates `c_i = (c_{i-1} - s_i + Σ t_j a_{i-j}) / 2` from a seed value of
/// `c_{n-1}`; `None` if a division is inexact, a value leaves the range, or
/// the cycle fails to close.
fn propagate(
    seed: i64,
    rhs: &[i64],
    s: &BitSequence,
    range: &std::ops::RangeInclusive<i64>,
) -> Option<Vec<i64>> {
    let mut prev = seed;
    let mut out = Vec::with_capacity(rhs.len());
    for (i, &v) in rhs.iter().enumerate() {
        let num = prev - i64::from(s.as_slice()[i]) + v;
        if num % 2 != 0 {
            return None;
        }
        let c = num / 2;
        if !range.contains(&c) {
            return None;
        }
        out.push(c);
        prev = c;
    }
    (prev == seed).then_some(out)
}

/// Every carry word satisfying the recurrence, one per successful seed.
/// Normally empty or a singleton; exposed to check uniqueness.
pub fn all_carry_solutions(
    l: &SignedPowerForm,
    a: &BitSequence,
    s: &BitSequence,
) -> Result<Vec<CarrySequence>> {
    check_lengths(a, s)?;
    let rhs = l.convolve(a);
    let range = l.carry_range();
    Ok(range
        .clone()
        .filter_map(|seed| propagate(seed, &rhs, s, &range))
        .map(CarrySequence::new)
        .collect())
}

/// The unique carry word for `s ≡ l·a`, found by trying every seed for `c_{n-1}`.
pub fn solve_carries(
    l: &SignedPowerForm,
    a: &BitSequence,
    s: &BitSequence,
) -> Result<CarrySequence> {
    let mut sols = all_carry_solutions(l, a, s)?;
    match sols.len() {
        0 => Err(Error::Inconsistent(a.n())),
        1 => Ok(sols.pop().unwrap()),
        k => Err(Error::Internal(format!(
            "{k} distinct carry sequences for one congruence"
        ))),
    }
}

/// Whether `c` satisfies the recurrence for `(l, a, s)` and stays in range.
pub fn check_carries(
    l: &SignedPowerForm,
    a: &BitSequence,
    s: &BitSequence,
    c: &CarrySequence,
) -> bool {
    if a.len() != s.len() || a.len() != c.as_slice().len() {
        return false;
    }
    let range = l.carry_range();
    if !c.as_slice().iter().all(|v| range.contains(v)) {
        return false;
    }
    let rhs = l.convolve(a);
    let n = a.len();
    (0..n).all(|i| {
        let prev = c.as_slice()[(i + n - 1) % n];
        2 * c.as_slice()[i] - prev + i64::from(s.as_slice()[i]) == rhs[i]
    })
}

/// Solves for the carries and recomputes `s` from `(l, a, c)`.
pub fn verify_congruence(
    l: &SignedPowerForm,
    a: &BitSequence,
    s: &BitSequence,
) -> Result<CarrySequence> {
    let c = solve_carries(l, a, s)?;
    let rhs = l.convolve(a);
    let n = a.len();
    let c_ = c.as_slice();
    let rebuilt =
        (0..n).all(|i| rhs[i] - 2 * c_[i] + c_[(i + n - 1) % n] == i64::from(s.as_slice()[i]));
    if !rebuilt {
        return Err(Error::Internal(
            "carry sequence does not reproduce s".into(),
        ));
    }
    Ok(c)
}

/// Outcome of [`carry_constraints_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryReport {
    pub carry_weight: i64,
    /// `c_i + c_{i-r} ∈ {-1, 0, 1}` for every `i`.
    pub pairwise_bound: bool,
    /// `2|wt(c)| <= n`.
    pub weight_bound: bool,
    /// `wt(c) + wt(s) = (Σ t_j)·wt(a)`; for Kasami forms `Σ t_j = 1`.
    pub weight_identity: bool,
}

impl CarryReport {
    pub fn all_hold(&self) -> bool {
        self.pairwise_bound && self.weight_bound && self.weight_identity
    }
}

/// Checks the pairwise and weight constraints on a carry word that solves
/// the recurrence for `(l, a, s)`.
pub fn carry_constraints_check(
    c: &CarrySequence,
    l: &SignedPowerForm,
    r: u64,
    a: &BitSequence,
    s: &BitSequence,
) -> Result<CarryReport> {
    check_lengths(a, s)?;
    if !check_carries(l, a, s, c) {
        return Err(Error::InvalidParameter(
            "carry sequence does not solve the recurrence for (l, a, s)".into(),
        ));
    }
    let n = c.as_slice().len() as i64;
    let r = (r % n as u64) as i64;
    let pairwise_bound = (0..n).all(|i| (-1..=1).contains(&(c.get(i) + c.get(i - r))));
    let w = c.weight();
    Ok(CarryReport {
        carry_weight: w,
        pairwise_bound,
        weight_bound: 2 * w.abs() <= n,
        weight_identity: w + s.weight() as i64 == l.coefficient_sum() * a.weight() as i64,
    })
}

/// `l·a` as a bit sequence; the `s` that makes the congruence hold.
pub fn product_bits(l: &SignedPowerForm, a: &BitSequence) -> Result<BitSequence> {
    Ok(mul_mod(&l.residue(a.n())?, &a.to_residue())?.to_bits())
}
