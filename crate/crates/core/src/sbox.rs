//! Monomial S-boxes over GF(2^n): differential uniformity, APN test,
//! compositional inverses and the catalog of known exponent families.
//!
//! Field elements are `u32` words in the polynomial basis modulo the
//! context's reduction polynomial.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::residue::{family_exponent, modulus, mul_mod, ExponentFamily, Residue};

/// Default cap on `n` for exhaustive analysis.
pub const DEFAULT_MAX_N: u32 = 24;
/// Largest `n` any override may raise the cap to.
pub const HARD_MAX_N: u32 = 31;

/// Lexicographically smallest irreducible polynomial of each degree 2..=24.
const SMALLEST_IRREDUCIBLE: [u64; 23] = [
    0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021, 0x8003,
    0x1002b, 0x20009, 0x40009, 0x80027, 0x100009, 0x200005, 0x400003, 0x800021, 0x100001b,
];

fn degree(p: u64) -> u32 {
    63 - p.leading_zeros()
}

fn poly_mod(mut a: u64, p: u64) -> u64 {
    let dp = degree(p);
    while a != 0 && degree(a) >= dp {
        a ^= p << (degree(a) - dp);
    }
    a
}

/// Carry-less product of two polynomials of degree < 32.
fn clmul(a: u64, b: u64) -> u64 {
    let mut out = 0;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    out
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: `p` of degree `n` is irreducible iff `x^{2^n} ≡ x` and
/// `gcd(x^{2^{n/q}} - x, p) = 1` for every prime `q | n`.
pub fn is_irreducible(p: u64) -> bool {
    if p < 4 {
        return false;
    }
    let n = degree(p);
    if n > 32 {
        return false;
    }
    let frob = |k: u32| {
        let mut x = 0b10;
        for _ in 0..k {
            x = poly_mod(clmul(x, x), p);
        }
        x
    };
    if frob(n) != 0b10 {
        return false;
    }
    prime_factors(n)
        .into_iter()
        .all(|q| poly_gcd(p, frob(n / q) ^ 0b10) == 1)
}

fn smallest_irreducible(n: u32) -> u64 {
    if (2..=24).contains(&n) {
        return SMALLEST_IRREDUCIBLE[n as usize - 2];
    }
    let mut p = (1u64 << n) | 1;
    while !is_irreducible(p) {
        p += 2;
    }
    p
}

/// GF(2^n) in a polynomial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldContext {
    n: u32,
    poly: u64,
}

impl FieldContext {
    /// The field with the smallest irreducible, `2 <= n <= 24`.
    pub fn new(n: u32) -> Result<Self> {
        Self::with_limit(n, DEFAULT_MAX_N)
    }

    /// As [`FieldContext::new`] with a raised cap (at most [`HARD_MAX_N`]).
    pub fn with_limit(n: u32, max_n: u32) -> Result<Self> {
        Self::check_n(n, max_n)?;
        Ok(Self {
            n,
            poly: smallest_irreducible(n),
        })
    }

    /// A field with an explicit reduction polynomial, encoded as an `(n+1)`-bit word.
    pub fn with_polynomial(n: u32, poly: u64) -> Result<Self> {
        Self::check_n(n, HARD_MAX_N)?;
        if degree(poly) != n || !is_irreducible(poly) {
            return Err(Error::InvalidParameter(format!(
                "{poly:#x} is not an irreducible polynomial of degree {n}"
            )));
        }
        Ok(Self { n, poly })
    }

    fn check_n(n: u32, max_n: u32) -> Result<()> {
        let max_n = max_n.min(HARD_MAX_N);
        if !(2..=max_n).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "field analysis needs 2 <= n <= {max_n}, got {n}"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn polynomial(&self) -> u64 {
        self.poly
    }

    pub fn size(&self) -> usize {
        1usize << self.n
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        poly_mod(clmul(u64::from(a), u64::from(b)), self.poly) as u32
    }

    /// `x^l` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, x: u32, l: &BigUint) -> u32 {
        let mut acc = 1;
        for i in (0..l.bits()).rev() {
            acc = self.mul(acc, acc);
            if l.bit(i) {
                acc = self.mul(acc, x);
            }
        }
        acc
    }
}

/// Value table of `x ↦ x^l`.
#[derive(Debug, Clone)]
pub struct PowerMap {
    ctx: FieldContext,
    table: Vec<u32>,
}

impl PowerMap {
    /// `1 <= l <= 2^n - 1`.
    pub fn new(l: &BigUint, ctx: FieldContext) -> Result<Self> {
        if l.bits() == 0 || *l > modulus(ctx.n) {
            return Err(Error::InvalidParameter(format!(
                "exponent {l} outside [1, 2^{}-1]",
                ctx.n
            )));
        }
        let table = (0..ctx.size() as u32)
            .into_par_iter()
            .map(|x| ctx.pow(x, l))
            .collect();
        Ok(Self { ctx, table })
    }

    pub fn context(&self) -> FieldContext {
        self.ctx
    }

    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    /// `row[b] = |{x : f(x) + f(x+a) = b}|`.
    pub fn difference_row(&self, a: u32) -> Vec<u32> {
        let mut row = vec![0; self.table.len()];
        self.fill_row(a, &mut row);
        row
    }

    fn fill_row(&self, a: u32, row: &mut [u32]) {
        for (x, &fx) in self.table.iter().enumerate() {
            row[(fx ^ self.table[x ^ a as usize]) as usize] += 1;
        }
    }

    /// Maximum entry over `a ≠ 0` of the difference table.
    pub fn differential_uniformity(&self) -> u32 {
        let size = self.table.len();
        (1..size as u32)
            .into_par_iter()
            .fold(
                || (vec![0u32; size], 0u32),
                |(mut row, best), a| {
                    row.iter_mut().for_each(|c| *c = 0);
                    self.fill_row(a, &mut row);
                    let m = row.iter().copied().max().unwrap_or(0);
                    (row, best.max(m))
                },
            )
            .map(|(_, best)| best)
            .max()
            .unwrap_or(0)
    }
}

/// Differential uniformity of `x ↦ x^l` over `ctx`.
pub fn differential_uniformity(l: &BigUint, ctx: FieldContext) -> Result<u32> {
    Ok(PowerMap::new(l, ctx)?.differential_uniformity())
}

pub fn is_apn(l: &BigUint, ctx: FieldContext) -> Result<bool> {
    Ok(differential_uniformity(l, ctx)? == 2)
}

/// Whether `(x^l)^{l_inv} = x` on all of GF(2^n). The modular condition
/// `l · l_inv ≡ 1 (mod 2^n - 1)` is evaluated as well; the two must agree.
pub fn verify_compositional_inverse(
    l: &BigUint,
    l_inv: &BigUint,
    ctx: FieldContext,
) -> Result<bool> {
    let m = modulus(ctx.n);
    for v in [l, l_inv] {
        if v.bits() == 0 || *v > m {
            return Err(Error::InvalidParameter(format!(
                "exponent {v} outside [1, 2^{}-1]",
                ctx.n
            )));
        }
    }
    let field = (0..ctx.size() as u32)
        .into_par_iter()
        .all(|x| ctx.pow(ctx.pow(x, l), l_inv) == x);
    let arith = mul_mod(
        &Residue::new(ctx.n, l.clone())?,
        &Residue::new(ctx.n, l_inv.clone())?,
    )?
    .is_one();
    if field != arith {
        return Err(Error::Internal(format!(
            "field check ({field}) and modular check ({arith}) disagree for l={l}, l_inv={l_inv}, n={}",
            ctx.n
        )));
    }
    Ok(field)
}

/// One instantiated row of the known-exponent tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub family: ExponentFamily,
    pub exponent: Residue,
    /// The table's side condition, as text.
    pub conditions: &'static str,
    pub claimed_degree: u64,
    /// 2 for the odd-dimension table, 4 for the even-dimension table.
    pub claimed_uniformity: u32,
    pub source_table: u8,
    /// Whether `gcd(exponent, 2^n - 1) = 1`.
    pub invertible: bool,
}

fn entry(
    family: ExponentFamily,
    n: u32,
    conditions: &'static str,
    claimed_degree: u64,
    table: u8,
) -> Result<CatalogEntry> {
    let exponent = family_exponent(&family, n)?;
    let invertible = exponent.value().gcd(&modulus(n)).is_one();
    Ok(CatalogEntry {
        family,
        exponent,
        conditions,
        claimed_degree,
        claimed_uniformity: if table == 1 { 2 } else { 4 },
        source_table: table,
        invertible,
    })
}

/// Known APN exponents (odd `n`) or differentially 4-uniform permutation
/// exponents (even `n`) up to inversion and cyclotomic equivalence.
/// Empty for `n < 3`.
pub fn catalog_lookup(n: u32) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    if n < 3 {
        return Ok(out);
    }
    let n64 = u64::from(n);
    let t = n64 / 2;
    if n % 2 == 1 {
        for r in (1..=t).filter(|r| r.gcd(&n64) == 1) {
            out.push(entry(
                ExponentFamily::Gold(r),
                n,
                "gcd(r,n)=1, r<n/2",
                2,
                1,
            )?);
        }
        for r in (2..=t).filter(|r| r.gcd(&n64) == 1) {
            out.push(entry(
                ExponentFamily::Kasami(r),
                n,
                "gcd(r,n)=1, r<n/2",
                r + 1,
                1,
            )?);
        }
        out.push(entry(ExponentFamily::Welch(t), n, "", 3, 1)?);
        if t % 2 == 0 {
            out.push(entry(ExponentFamily::Niho(t), n, "t even", (t + 2) / 2, 1)?);
        } else {
            out.push(entry(ExponentFamily::Niho(t), n, "t odd", t + 1, 1)?);
        }
        out.push(entry(ExponentFamily::InverseExp, n, "", n64 - 1, 1)?);
        if n % 5 == 0 {
            let r = n64 / 5;
            out.push(entry(ExponentFamily::Dobbertin(r), n, "5r=n", r + 3, 1)?);
        }
    } else {
        if t % 2 == 1 {
            let rs: Vec<u64> = (1..t).filter(|r| r.gcd(&n64) == 2).collect();
            for &r in &rs {
                out.push(entry(
                    ExponentFamily::Gold(r),
                    n,
                    "t odd, gcd(r,n)=2, r<n/2",
                    2,
                    2,
                )?);
            }
            for &r in &rs {
                out.push(entry(
                    ExponentFamily::Kasami(r),
                    n,
                    "t odd, gcd(r,n)=2, r<n/2",
                    r + 1,
                    2,
                )?);
            }
        }
        out.push(entry(ExponentFamily::InverseExp, n, "", n64 - 1, 2)?);
        if n % 4 == 0 && (n / 4) % 2 == 1 {
            out.push(entry(
                ExponentFamily::BrackenLeander(n64 / 4),
                n,
                "4r=n, r odd",
                3,
                2,
            )?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn du(l: u64, n: u32) -> u32 {
        differential_uniformity(&BigUint::from(l), FieldContext::new(n).unwrap()).unwrap()
    }

    #[test]
    fn smallest_irreducibles_table() {
        for n in 2..=24u32 {
            let p = SMALLEST_IRREDUCIBLE[n as usize - 2];
            assert_eq!(degree(p), n);
            assert!(is_irreducible(p), "n={n}");
            let first = ((1u64 << n)..p).find(|&q| is_irreducible(q));
            assert_eq!(first, None, "n={n}");
        }
        assert!(!is_irreducible(0b101));
        assert_eq!(smallest_irreducible(25), 0x2000009);
    }

    #[test]
    fn field_limits() {
        assert!(FieldContext::new(1).is_err());
        assert!(FieldContext::new(25).is_err());
        assert!(FieldContext::with_limit(25, 26).is_ok());
        assert!(FieldContext::with_limit(32, 40).is_err());
        assert!(FieldContext::with_polynomial(4, 0x19).is_ok());
        assert!(FieldContext::with_polynomial(4, 0x15).is_err());
        assert!(FieldContext::with_polynomial(4, 0x7).is_err());
    }

    #[test]
    fn field_arithmetic() {
        let f = FieldContext::new(8).unwrap();
        // the AES field
        assert_eq!(f.mul(0x57, 0x83), 0xc1);
        let order = modulus(8);
        for x in 1..256u32 {
            assert_eq!(f.pow(x, &order), 1);
        }
        assert_eq!(f.pow(0, &BigUint::from(0u32)), 1);
    }

    #[test]
    fn uniformity_examples() {
        assert_eq!(du(3, 5), 2);
        assert_eq!(du(1, 3), 8);
        assert_eq!(du(57, 7), 2);
        assert_eq!(du(73, 12), 4);
        assert_eq!(du(1, 4), 16);
        let ctx = FieldContext::new(7).unwrap();
        assert!(is_apn(&BigUint::from(9u32), ctx).unwrap());
        assert!(is_apn(&BigUint::from(78u32), ctx).unwrap());
        assert!(!is_apn(&BigUint::from(1u32), ctx).unwrap());
        assert!(differential_uniformity(&BigUint::from(0u32), ctx).is_err());
        assert!(differential_uniformity(&BigUint::from(128u32), ctx).is_err());
    }

    #[test]
    fn compositional_inverse_examples() {
        let ctx = FieldContext::new(7).unwrap();
        let b = |v: u32| BigUint::from(v);
        assert!(verify_compositional_inverse(&b(57), &b(78), ctx).unwrap());
        assert!(verify_compositional_inverse(&b(1), &b(1), ctx).unwrap());
        let ctx5 = FieldContext::new(5).unwrap();
        assert!(!verify_compositional_inverse(&b(3), &b(3), ctx5).unwrap());
        assert!(!verify_compositional_inverse(&b(31), &b(1), ctx5).unwrap());
    }

    #[test]
    fn catalog_examples() {
        let c = catalog_lookup(7).unwrap();
        let vals = |name: &str| -> Vec<u64> {
            c.iter()
                .filter(|e| e.family.name() == name)
                .map(|e| e.exponent.value().try_into().unwrap())
                .collect()
        };
        assert_eq!(vals("gold"), vec![3, 5, 9]);
        assert_eq!(vals("kasami"), vec![13, 57]);
        assert_eq!(vals("welch"), vec![11]);
        assert_eq!(vals("inverse"), vec![63]);
        assert!(c
            .iter()
            .all(|e| e.invertible && e.source_table == 1 && e.claimed_uniformity == 2));

        let c = catalog_lookup(4).unwrap();
        let got: Vec<(String, u64)> = c
            .iter()
            .map(|e| {
                (
                    e.family.name().to_string(),
                    e.exponent.value().try_into().unwrap(),
                )
            })
            .collect();
        assert_eq!(
            got,
            vec![
                ("inverse".to_string(), 14),
                ("bracken-leander".to_string(), 7)
            ]
        );

        let c = catalog_lookup(12).unwrap();
        assert!(c
            .iter()
            .any(|e| e.family == ExponentFamily::BrackenLeander(3)
                && e.exponent == Residue::new(12, 73u32).unwrap()));
        assert!(catalog_lookup(2).unwrap().is_empty());

        let c = catalog_lookup(10).unwrap();
        assert!(c.iter().any(|e| e.family == ExponentFamily::Kasami(4)));
        assert!(c.iter().all(|e| e.source_table == 2));
    }
}
