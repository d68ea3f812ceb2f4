//! Arithmetic in `Z_{2^n-1}`.
//!
//! Values are arbitrary precision. Reduction folds `n`-bit chunks together
//! (`2^n ≡ 1`), so the only division-like step is a final comparison against
//! the all-ones word, which is the second spelling of zero.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `2^n - 1` as a big integer.
pub fn modulus(n: u32) -> BigUint {
    (BigUint::one() << n) - 1u32
}

fn fold(mut x: BigUint, n: u32) -> BigUint {
    let mask = modulus(n);
    while x.bits() > u64::from(n) {
        x = (&x & &mask) + (&x >> n);
    }
    if x == mask {
        BigUint::zero()
    } else {
        x
    }
}

fn check_n(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ring parameter n must be >= 2, got {n}"
        )));
    }
    Ok(())
}

/// An element of `Z_{2^n-1}`, held as its least non-negative representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    n: u32,
    value: BigUint,
}

impl Residue {
    /// Reduces `value` modulo `2^n - 1`.
    pub fn new(n: u32, value: impl Into<BigUint>) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            value: fold(value.into(), n),
        })
    }

    /// Reduces a signed integer modulo `2^n - 1`.
    pub fn from_signed(n: u32, value: &BigInt) -> Result<Self> {
        check_n(n)?;
        let m = BigInt::from(modulus(n));
        let v = value.mod_floor(&m);
        Ok(Self {
            n,
            value: v.to_biguint().expect("mod_floor is non-negative"),
        })
    }

    pub fn zero(n: u32) -> Result<Self> {
        Self::new(n, 0u32)
    }

    pub fn one(n: u32) -> Result<Self> {
        Self::new(n, 1u32)
    }

    /// `2^i mod 2^n-1`; negative `i` allowed.
    pub fn pow2(n: u32, i: i64) -> Result<Self> {
        check_n(n)?;
        let k = i.rem_euclid(i64::from(n)) as u32;
        Ok(Self {
            n,
            value: BigUint::one() << k,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn to_bits(&self) -> BitSequence {
        to_bits(self)
    }

    /// `self * other`, both in the same ring.
    pub fn mul(&self, other: &Residue) -> Result<Residue> {
        mul_mod(self, other)
    }

    pub fn weight(&self) -> u64 {
        binary_weight(self)
    }

    pub fn shift(&self, i: i64) -> Residue {
        cyclotomic_shift(self, i)
    }

    /// MSB-first binary string with `0b` prefix, always `n` digits.
    pub fn to_binary_string(&self) -> String {
        self.to_bits().to_binary_string()
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A length-`n` binary word, index 0 least significant.
///
/// The all-ones word is rejected: it names the same class as the zero word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSequence {
    bits: Vec<u8>,
}

impl BitSequence {
    /// Builds a word from LSB-first bits.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        let n = u32::try_from(bits.len())
            .map_err(|_| Error::InvalidParameter("bit sequence too long".into()))?;
        check_n(n)?;
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidParameter(format!(
                "bit value {b} is not 0 or 1"
            )));
        }
        if bits.iter().all(|&b| b == 1) {
            return Err(Error::AllOnesWord(n));
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: u32) -> Result<Self> {
        Self::new(vec![0; n as usize])
    }

    pub fn n(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at a cyclic index.
    pub fn get(&self, i: i64) -> u8 {
        self.bits[i.rem_euclid(self.bits.len() as i64) as usize]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn weight(&self) -> u64 {
        self.bits.iter().map(|&b| u64::from(b)).sum()
    }

    pub fn to_residue(&self) -> Residue {
        let mut v = BigUint::zero();
        for (i, &b) in self.bits.iter().enumerate() {
            if b == 1 {
                v.set_bit(i as u64, true);
            }
        }
        Residue {
            n: self.n(),
            value: v,
        }
    }

    pub fn to_binary_string(&self) -> String {
        let mut s = String::with_capacity(self.bits.len() + 2);
        s.push_str("0b");
        s.extend(
            self.bits
                .iter()
                .rev()
                .map(|&b| if b == 1 { '1' } else { '0' }),
        );
        s
    }
}

/// The exponent families of the known APN and 4-uniform monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExponentFamily {
    /// `2^r + 1`
    Gold(u64),
    /// `2^{2r} - 2^r + 1`
    Kasami(u64),
    /// `2^{2r} + 2^r + 1`
    BrackenLeander(u64),
    /// The field inversion `x^{-1}`: `2^{n-1}-1` for odd `n`, `2^n-2` for even `n`
    /// (cyclotomic equivalent spellings).
    InverseExp,
    /// `2^{4r} + 2^{3r} + 2^{2r} + 2^r - 1`
    Dobbertin(u64),
    /// `2^t + 3`
    Welch(u64),
    /// `2^t + 2^{t/2} - 1` for even `t`, `2^t + 2^{(3t+1)/2} - 1` for odd `t`
    Niho(u64),
    /// An explicit exponent.
    Raw(BigUint),
}

impl ExponentFamily {
    /// Defining integer as signed powers of two `(exponent, coefficient)`.
    /// `None` for [`ExponentFamily::Raw`].
    pub fn signed_terms(&self, n: u32) -> Option<Vec<(u64, i64)>> {
        use ExponentFamily::*;
        let n = u64::from(n);
        Some(match *self {
            Gold(r) => vec![(r, 1), (0, 1)],
            Kasami(r) => vec![(2 * r, 1), (r, -1), (0, 1)],
            BrackenLeander(r) => vec![(2 * r, 1), (r, 1), (0, 1)],
            InverseExp if n % 2 == 1 => vec![(n - 1, 1), (0, -1)],
            InverseExp => vec![(n, 1), (1, -1)],
            Dobbertin(r) => vec![(4 * r, 1), (3 * r, 1), (2 * r, 1), (r, 1), (0, -1)],
            Welch(t) => vec![(t, 1), (1, 1), (0, 1)],
            Niho(t) if t % 2 == 0 => vec![(t, 1), (t / 2, 1), (0, -1)],
            Niho(t) => vec![(t, 1), ((3 * t + 1) / 2, 1), (0, -1)],
            Raw(_) => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        use ExponentFamily::*;
        match self {
            Gold(_) => "gold",
            Kasami(_) => "kasami",
            BrackenLeander(_) => "bracken-leander",
            InverseExp => "inverse",
            Dobbertin(_) => "dobbertin",
            Welch(_) => "welch",
            Niho(_) => "niho",
            Raw(_) => "raw",
        }
    }
}

impl fmt::Display for ExponentFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ExponentFamily::*;
        match self {
            Gold(p) | Kasami(p) | BrackenLeander(p) | Dobbertin(p) => {
                write!(f, "{}(r={p})", self.name())
            }
            Welch(t) | Niho(t) => write!(f, "{}(t={t})", self.name()),
            InverseExp => f.write_str("inverse"),
            Raw(l) => write!(f, "raw({l})"),
        }
    }
}

/// Binary expansion of `x`, LSB first. Never the all-ones word.
pub fn to_bits(x: &Residue) -> BitSequence {
    let bits = (0..u64::from(x.n))
        .map(|i| u8::from(x.value.bit(i)))
        .collect();
    BitSequence { bits }
}

/// Product of two residues of the same ring.
pub fn mul_mod(a: &Residue, b: &Residue) -> Result<Residue> {
    if a.n != b.n {
        return Err(Error::ModulusMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(Residue {
        n: a.n,
        value: fold(&a.value * &b.value, a.n),
    })
}

/// Inverse of `l` modulo `2^n - 1` by the extended Euclidean algorithm.
///
/// This is the reference every closed form is checked against; it shares no
/// code with them.
pub fn ext_euclid_inverse(l: &BigUint, n: u32) -> Result<Residue> {
    check_n(n)?;
    if l.is_zero() {
        return Err(Error::InvalidParameter("l must be >= 1".into()));
    }
    let m = BigInt::from(modulus(n));
    let a = BigInt::from_biguint(Sign::Plus, l.clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return Err(Error::NotInvertible {
            what: l.to_string(),
            n,
        });
    }
    let x = if ext.x.is_negative() {
        ext.x.mod_floor(&m)
    } else {
        ext.x
    };
    Residue::from_signed(n, &x)
}

/// Number of ones in the binary expansion; the algebraic degree of `x -> x^value`.
pub fn binary_weight(x: &Residue) -> u64 {
    x.value.count_ones()
}

/// `2^i * l`, i.e. a cyclic rotation of the bits by `i` (negative `i` rotates right).
pub fn cyclotomic_shift(l: &Residue, i: i64) -> Residue {
    let n = l.n;
    let k = i.rem_euclid(i64::from(n)) as u32;
    if k == 0 {
        return l.clone();
    }
    let rotated = ((&l.value << k) & modulus(n)) | (&l.value >> (n - k));
    Residue {
        n,
        value: fold(rotated, n),
    }
}

/// Smallest member of the cyclotomic class `{2^i * l : 0 <= i < n}`.
pub fn cyclotomic_canonical(l: &Residue) -> Residue {
    (0..i64::from(l.n))
        .map(|i| cyclotomic_shift(l, i))
        .min_by(|a, b| a.value.cmp(&b.value))
        .expect("n >= 2")
}

/// The family's defining integer reduced modulo `2^n - 1`. Parameter
/// conditions from the tables are not enforced.
pub fn family_exponent(f: &ExponentFamily, n: u32) -> Result<Residue> {
    check_n(n)?;
    match f.signed_terms(n) {
        None => match f {
            ExponentFamily::Raw(l) => Residue::new(n, l.clone()),
            _ => unreachable!(),
        },
        Some(terms) => {
            let mut acc = BigInt::zero();
            for (j, t) in terms {
                let k = (j % u64::from(n)) as u32;
                acc += BigInt::from(t) * (BigInt::one() << k);
            }
            Residue::from_signed(n, &acc)
        }
    }
}
