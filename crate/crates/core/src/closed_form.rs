//! Closed-form inverses of Gold, Kasami and Bracken-Leander exponents.
//!
//! Every construction produces two `r`-matrices: the inverse and the carry
//! word that certifies it. Rows are assembled from short blocks with
//! repeat counts, so each case reads as a list of `(block, count)` pieces.
//! Before returning, every result is re-checked twice: `l · inverse ≡ 1`
//! and the carry word against the add-with-carry recurrence.
//!
//! Notation used in the Kasami layouts, for `d = gcd(n, r)`, `m = n/d`
//! columns and `e = (r/d)^{-1} mod m`:
//!
//! * `e_sixths = ⌊e/6⌋`
//! * `m = quotient·e + remainder`, `0 <= remainder < e`
//! * `rem_sixths = ⌊remainder/6⌋`, `col_sixths = ⌊m/6⌋`

use std::fmt;

use num_integer::Integer;

use crate::carry::{canonical_form, check_carries, CarrySequence, SignedPowerForm};
use crate::error::{Error, Result};
use crate::orderings::{e_value, from_r_matrix, to_r_matrix, RMatrix};
use crate::residue::{family_exponent, mul_mod, ExponentFamily, Residue};

const B000111: &[i64] = &[0, 0, 0, 1, 1, 1];
const B011100: &[i64] = &[0, 1, 1, 1, 0, 0];
const B001110: &[i64] = &[0, 0, 1, 1, 1, 0];
const B111000: &[i64] = &[1, 1, 1, 0, 0, 0];
const B110001: &[i64] = &[1, 1, 0, 0, 0, 1];
const B100011: &[i64] = &[1, 0, 0, 0, 1, 1];

/// One piece of a row layout.
enum Piece<'a> {
    /// A literal block.
    Lit(&'a [i64]),
    /// A block repeated `count` times.
    Rep(&'a [i64], i64),
    /// `len` alternating values starting with `first` (`first, 1-first, ...`).
    Alt(i64, i64),
}

use Piece::{Alt, Lit, Rep};

fn layout(pieces: Vec<Piece<'_>>, len: u64) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(len as usize);
    for p in pieces {
        match p {
            Lit(b) => out.extend_from_slice(b),
            Rep(b, count) => {
                if count < 0 {
                    return Err(Error::Internal(format!("negative repeat count {count}")));
                }
                for _ in 0..count {
                    out.extend_from_slice(b);
                }
            }
            Alt(first, count) => {
                if count < 0 {
                    return Err(Error::Internal(format!("negative run length {count}")));
                }
                out.extend((0..count).map(|i| (first + i) % 2));
            }
        }
    }
    if out.len() as u64 != len {
        return Err(Error::Internal(format!(
            "row layout has length {} instead of {len}",
            out.len()
        )));
    }
    Ok(out)
}

/// Which construction produced an inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    GoldGcd1,
    GoldGcdGt1,
    KasamiGcd1E6k1,
    KasamiGcd1E6k5,
    /// `e ≡ 3 (mod 6)`, remainder `≡ 1 (mod 6)`.
    KasamiGcd1E6k3T1,
    KasamiGcd1E6k3T2,
    KasamiGcd1E6k3T4,
    KasamiGcd1E6k3T5,
    /// `d > 1`, `n/d ≡ 3 (mod 6)`, `e ≡ 1 (mod 6)`.
    KasamiNdOddMod3E6k1,
    KasamiNdOddMod3E6k5,
    /// `d > 1`, `n/d` odd and prime to 3: sub-cases (a)..(h).
    KasamiNdOddA,
    KasamiNdOddB,
    KasamiNdOddC,
    KasamiNdOddD,
    KasamiNdOddE,
    KasamiNdOddF,
    KasamiNdOddG,
    KasamiNdOddH,
    KasamiNdEven6k2,
    KasamiNdEven6k4,
    BrackenLeander,
}

impl Case {
    pub fn label(self) -> &'static str {
        use Case::*;
        match self {
            GoldGcd1 => "GOLD_GCD1",
            GoldGcdGt1 => "GOLD_GCDGT1",
            KasamiGcd1E6k1 => "KASAMI_GCD1_E6K1",
            KasamiGcd1E6k5 => "KASAMI_GCD1_E6K5",
            KasamiGcd1E6k3T1 => "KASAMI_GCD1_E6K3_T6U1",
            KasamiGcd1E6k3T2 => "KASAMI_GCD1_E6K3_T6U2",
            KasamiGcd1E6k3T4 => "KASAMI_GCD1_E6K3_T6U4",
            KasamiGcd1E6k3T5 => "KASAMI_GCD1_E6K3_T6U5",
            KasamiNdOddMod3E6k1 => "KASAMI_NDODD_MOD3_E6K1",
            KasamiNdOddMod3E6k5 => "KASAMI_NDODD_MOD3_E6K5",
            KasamiNdOddA => "KASAMI_NDODD_CASE_A",
            KasamiNdOddB => "KASAMI_NDODD_CASE_B",
            KasamiNdOddC => "KASAMI_NDODD_CASE_C",
            KasamiNdOddD => "KASAMI_NDODD_CASE_D",
            KasamiNdOddE => "KASAMI_NDODD_CASE_E",
            KasamiNdOddF => "KASAMI_NDODD_CASE_F",
            KasamiNdOddG => "KASAMI_NDODD_CASE_G",
            KasamiNdOddH => "KASAMI_NDODD_CASE_H",
            KasamiNdEven6k2 => "KASAMI_NDEVEN_6K2",
            KasamiNdEven6k4 => "KASAMI_NDEVEN_6K4",
            BrackenLeander => "BL",
        }
    }
}

/// A [`Case`] plus whether the Kasami reflection `K_r^{-1} = 2^{-2r} K_{n-r}^{-1}` was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CaseLabel {
    pub case: Case,
    pub reflected: bool,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.case.label())?;
        if self.reflected {
            f.write_str("_REFLECTED")?;
        }
        Ok(())
    }
}

/// A closed-form inverse together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseResult {
    /// The family with the parameter actually used (after reduction mod `n`).
    pub family: ExponentFamily,
    pub n: u32,
    pub inverse: Residue,
    /// `binary_weight(inverse)`.
    pub weight: u64,
    /// The weight predicted by the case's formula.
    pub formula_weight: u64,
    pub label: CaseLabel,
    /// `e` of the construction that ran (after any reflection); 0 when unused.
    pub e: u64,
    /// `r`-matrix of the inverse, for the original `r`.
    pub r_matrix: RMatrix,
    /// `r`-matrix of the certifying carry word, for the original `r`.
    pub carry_matrix: RMatrix,
    pub carries: CarrySequence,
    pub warnings: Vec<String>,
}

/// Reduces `r` modulo `n`, rejecting `r ≡ 0`.
fn normalize_param(r: u64, n: u32, warnings: &mut Vec<String>) -> Result<u64> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be >= 1".into()));
    }
    let n64 = u64::from(n);
    if r >= n64 {
        let reduced = r % n64;
        if reduced == 0 {
            return Err(Error::InvalidParameter(format!(
                "r={r} is a multiple of n={n}"
            )));
        }
        warnings.push(format!("r={r} reduced modulo n={n} to {reduced}"));
        return Ok(reduced);
    }
    Ok(r)
}

struct Built {
    a: RMatrix,
    c: RMatrix,
    case: Case,
    formula_weight: u64,
    e: u64,
}

/// Turns matrices built for `work_r` into a checked result for `family`.
/// `shift` is applied to the inverse (the carry word is shift-invariant
/// under the Kasami reflection).
fn finalize(
    family: ExponentFamily,
    n: u32,
    r: u64,
    built: Built,
    shift: i64,
    warnings: Vec<String>,
) -> Result<InverseResult> {
    let a_bits = from_r_matrix(&built.a)?;
    let inverse = a_bits.to_residue().shift(shift);
    let carries = CarrySequence::new(built.c.to_sequence());

    let l = family_exponent(&family, n)?;
    if !mul_mod(&l, &inverse)?.is_one() {
        return Err(Error::Internal(format!(
            "{family}: closed form {inverse} is not the inverse mod 2^{n}-1"
        )));
    }
    let form: SignedPowerForm = canonical_form(&family)?;
    let bits = inverse.to_bits();
    if !check_carries(&form, &bits, &Residue::one(n)?.to_bits(), &carries) {
        return Err(Error::Internal(format!(
            "{family}: carry certificate fails for n={n}"
        )));
    }

    let r_matrix = to_r_matrix(&bits, r)?;
    let carry_matrix = RMatrix::from_sequence(carries.as_slice(), r)?;
    Ok(InverseResult {
        family,
        n,
        weight: inverse.weight(),
        inverse,
        formula_weight: built.formula_weight,
        label: CaseLabel {
            case: built.case,
            reflected: shift != 0,
        },
        e: built.e,
        r_matrix,
        carry_matrix,
        carries,
        warnings,
    })
}

// ---------------------------------------------------------------- Gold

/// `2^r + 1` is a unit modulo `2^n - 1` iff `n / gcd(n, r)` is odd.
pub fn gold_invertible(r: u64, n: u32) -> bool {
    (u64::from(n) / u64::from(n).gcd(&r)) % 2 == 1
}

/// Inverse of `2^r + 1` modulo `2^n - 1`.
///
/// The `r`-matrix has `d - 1` rows `(0,0,1,0,1,...,0,1)` over a last row
/// `(1,1,0,1,0,...,1,0)`; the carry rows are `(0,1,...,1)` over `(1,...,1)`.
/// With `d = 1` only the last row remains.
pub fn gold_inverse(r: u64, n: u32) -> Result<InverseResult> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be >= 2, got {n}")));
    }
    let mut warnings = Vec::new();
    let r = normalize_param(r, n, &mut warnings)?;
    if !gold_invertible(r, n) {
        return Err(Error::NotInvertible {
            what: format!("2^{r}+1"),
            n,
        });
    }
    let n64 = u64::from(n);
    let d = n64.gcd(&r);
    let m = (n64 / d) as i64;

    let upper = layout(vec![Lit(&[0, 0]), Alt(1, m - 2)], m as u64)?;
    let last = layout(vec![Lit(&[1]), Alt(1, m - 1)], m as u64)?;
    let mut rows = vec![upper; d as usize - 1];
    rows.push(last);

    let carry_upper = layout(vec![Lit(&[0]), Rep(&[1], m - 1)], m as u64)?;
    let mut carry_rows = vec![carry_upper; d as usize - 1];
    carry_rows.push(vec![1; m as usize]);

    let built = Built {
        a: RMatrix::from_rows(n, r, rows)?,
        c: RMatrix::from_rows(n, r, carry_rows)?,
        case: if d == 1 {
            Case::GoldGcd1
        } else {
            Case::GoldGcdGt1
        },
        formula_weight: (n64 - d + 2) / 2,
        e: e_value(r, n64),
    };
    finalize(ExponentFamily::Gold(r), n, r, built, 0, warnings)
}

// ---------------------------------------------------------------- Kasami

/// `2^{2r} - 2^r + 1` is a unit modulo `2^n - 1` iff `n/d` is odd, or `n/d`
/// is even, `r` is even and `gcd(r, n) = gcd(3r, n)`.
pub fn kasami_invertible(r: u64, n: u32) -> bool {
    let n = u64::from(n);
    let d = n.gcd(&r);
    let m = n / d;
    m % 2 == 1 || (r % 2 == 0 && d == n.gcd(&(3 * r)))
}

/// Shape parameters of an odd-column Kasami layout.
#[derive(Debug, Clone, Copy)]
struct OddShape {
    cols: u64,
    e: u64,
    e_sixths: i64,
    quotient: i64,
    remainder: u64,
    rem_sixths: i64,
    col_sixths: i64,
}

impl OddShape {
    fn new(cols: u64, e: u64) -> Self {
        let (quotient, remainder) = cols.div_rem(&e);
        Self {
            cols,
            e,
            e_sixths: (e / 6) as i64,
            quotient: quotient as i64,
            remainder,
            rem_sixths: (remainder / 6) as i64,
            col_sixths: (cols / 6) as i64,
        }
    }
}

/// `r`-ordered inverse of `K_r` modulo `2^m - 1` for `gcd(r, m) = 1`, `e` odd,
/// with its `r`-ordered carry word.
fn kasami_coprime_rows(sh: OddShape) -> Result<(Vec<i64>, Vec<i64>, Case)> {
    let m = sh.cols;
    let e = sh.e as i64;
    let k = sh.e_sixths;
    let (s, u) = (sh.quotient, sh.rem_sixths);
    let mi = m as i64;

    let (a, case) = match sh.e % 6 {
        1 => (
            layout(vec![Lit(&[1]), Alt(1, mi - e), Rep(B111000, k)], m)?,
            Case::KasamiGcd1E6k1,
        ),
        5 => (
            layout(
                vec![Lit(&[0]), Alt(0, mi - e + 2), Lit(&[1, 1]), Rep(B000111, k)],
                m,
            )?,
            Case::KasamiGcd1E6k5,
        ),
        3 => {
            // blocks of length 2e
            let x = layout(
                vec![
                    Lit(&[0, 1, 1]),
                    Rep(B000111, k),
                    Lit(&[0, 0, 0]),
                    Rep(B011100, k),
                ],
                2 * sh.e,
            )?;
            let y = layout(
                vec![
                    Lit(&[0, 0, 0]),
                    Rep(B011100, k),
                    Lit(&[0, 1, 1]),
                    Rep(B000111, k),
                ],
                2 * sh.e,
            )?;
            match sh.remainder % 6 {
                1 => {
                    let mut a = layout(
                        vec![
                            Rep(B000111, u),
                            Rep(&y, (s - 2) / 2),
                            Lit(&[0, 0, 0]),
                            Rep(B011100, k),
                            Lit(&[0, 1, 1]),
                            Rep(B000111, u),
                            Alt(0, e - 3 - 6 * u),
                            Lit(&[0]),
                        ],
                        m,
                    )?;
                    // the indicator word (1,0,...,0); position 0 is always 0 here
                    if a[0] != 0 {
                        return Err(Error::Internal("indicator adjustment would carry".into()));
                    }
                    a[0] = 1;
                    (a, Case::KasamiGcd1E6k3T1)
                }
                2 => (
                    layout(
                        vec![
                            Lit(&[0, 1]),
                            Rep(B000111, u),
                            Rep(&y, (s - 1) / 2),
                            Lit(&[0, 0]),
                            Alt(1, 6 * u),
                            Lit(&[1]),
                            Rep(B011100, (e - 6 * u - 3) / 6),
                        ],
                        m,
                    )?,
                    Case::KasamiGcd1E6k3T2,
                ),
                4 => (
                    layout(
                        vec![
                            Lit(&[0, 0, 0]),
                            Rep(B011100, u),
                            Rep(&x, (s - 1) / 2),
                            Lit(&[0, 1, 1, 0]),
                            Alt(1, 6 * u),
                            Lit(&[1, 0, 1, 1, 1]),
                            Rep(B000111, (e - 6 * u - 9) / 6),
                            Lit(&[0]),
                        ],
                        m,
                    )?,
                    Case::KasamiGcd1E6k3T4,
                ),
                5 => (
                    layout(
                        vec![
                            Lit(&[0, 1, 1, 0, 0]),
                            Rep(B011100, u),
                            Rep(&x, (s - 2) / 2),
                            Lit(&[0, 1, 1]),
                            Rep(B000111, k),
                            Lit(&[0]),
                            Rep(B000111, u),
                            Lit(B000111),
                            Alt(0, e - 7 - 6 * u),
                        ],
                        m,
                    )?,
                    Case::KasamiGcd1E6k3T5,
                ),
                t => {
                    return Err(Error::Internal(format!(
                        "remainder ≡ {t} mod 6 cannot occur for e ≡ 3"
                    )))
                }
            }
        }
        _ => {
            return Err(Error::Internal(format!(
                "e={} is even after reflection",
                sh.e
            )))
        }
    };

    let s1 = || Alt(0, 6 * u);
    let s2 = || layout(vec![Lit(&[0, 0]), Alt(1, e - 2)], sh.e);
    let c = match case {
        Case::KasamiGcd1E6k1 => layout(vec![Alt(0, mi)], m)?,
        Case::KasamiGcd1E6k5 => layout(vec![Lit(&[0]), Alt(0, mi - 1)], m)?,
        Case::KasamiGcd1E6k3T1 => layout(vec![s1(), Rep(&s2()?, s), Lit(&[0])], m)?,
        Case::KasamiGcd1E6k3T2 => layout(vec![Lit(&[-1, 1]), s1(), Rep(&s2()?, s)], m)?,
        Case::KasamiGcd1E6k3T4 => {
            layout(vec![Lit(&[0, 0, 1]), s1(), Rep(&s2()?, s), Lit(&[0])], m)?
        }
        Case::KasamiGcd1E6k3T5 => layout(vec![Lit(&[0, 0, 1, 0, 1]), s1(), Rep(&s2()?, s)], m)?,
        _ => unreachable!(),
    };
    Ok((a, c, case))
}

/// Weight formula of each Kasami case.
pub fn kasami_case_weight(case: Case, n: u64, d: u64, quotient: u64) -> Option<u64> {
    use Case::*;
    let w = match case {
        KasamiGcd1E6k1 | KasamiGcd1E6k5 => (n + 1) / 2,
        KasamiGcd1E6k3T1 | KasamiGcd1E6k3T5 => (n - quotient + 1) / 2,
        KasamiGcd1E6k3T2 | KasamiGcd1E6k3T4 => (n - quotient) / 2,
        KasamiNdOddMod3E6k1 | KasamiNdOddMod3E6k5 => (n + 4 - 3 * d) / 2,
        KasamiNdOddA | KasamiNdOddB | KasamiNdOddC | KasamiNdOddD => (n - d + 2) / 2,
        KasamiNdOddE | KasamiNdOddH => (n + 2 - d * (quotient + 1)) / 2,
        KasamiNdOddF | KasamiNdOddG => (n + 2 - d * (quotient + 2)) / 2,
        KasamiNdEven6k2 | KasamiNdEven6k4 => (n + 2) / 2,
        _ => return None,
    };
    Some(w)
}

/// `n/d` odd, `e` odd.
fn kasami_odd_cols(n: u32, r: u64, d: u64, e: u64) -> Result<Built> {
    let n64 = u64::from(n);
    let m = n64 / d;
    let sh = OddShape::new(m, e);
    let (base, base_carry, base_case) = kasami_coprime_rows(sh)?;
    let k = sh.e_sixths;
    let mi = m as i64;
    let dn = d as usize;

    let (rows, carry_rows, case) = if d == 1 {
        (vec![base], vec![base_carry], base_case)
    } else if m % 3 == 0 {
        // d-1 identical rows over the coprime inverse of K_{r/d} mod 2^m-1
        let (upper, case) = match e % 6 {
            1 => (
                layout(
                    vec![
                        Lit(&[0, 0]),
                        Rep(B001110, (mi - e as i64 - 2) / 6),
                        Rep(B000111, k),
                        Lit(&[0]),
                    ],
                    m,
                )?,
                Case::KasamiNdOddMod3E6k1,
            ),
            5 => (
                layout(
                    vec![
                        Lit(&[0, 1, 0, 0, 0]),
                        Rep(B111000, (mi - e as i64 - 4) / 6),
                        Lit(&[1, 1, 0, 0]),
                        Rep(B011100, k),
                    ],
                    m,
                )?,
                Case::KasamiNdOddMod3E6k5,
            ),
            _ => {
                return Err(Error::Internal(format!(
                    "e={e} shares a factor 3 with n/d={m}"
                )))
            }
        };
        let mut rotated = base_carry.clone();
        rotated.rotate_left(e as usize);
        rotated[0] -= 1;
        let mut rows = vec![upper; dn - 1];
        rows.push(base);
        let mut carries = vec![rotated; dn - 1];
        carries.push(base_carry);
        (rows, carries, case)
    } else {
        let (s, u, v) = (sh.quotient, sh.rem_sixths, sh.col_sixths);
        let y = layout(
            vec![
                Lit(&[0, 0, 0]),
                Rep(B011100, k),
                Lit(&[0, 1, 1]),
                Rep(B000111, k),
            ],
            12 * k as u64 + 6,
        )?;
        let z = layout(
            vec![
                Lit(&[0, 1, 1]),
                Rep(B000111, k),
                Lit(&[0, 0, 0]),
                Rep(B011100, k),
            ],
            12 * k as u64 + 6,
        )?;
        let (lower, case) = match (e % 6, m % 6, sh.remainder % 6) {
            (1, 1, _) => (
                layout(vec![Rep(B000111, v), Lit(&[0])], m)?,
                Case::KasamiNdOddA,
            ),
            (1, 5, _) => (
                layout(vec![Rep(B110001, v), Lit(&[1, 1, 0, 0, 0])], m)?,
                Case::KasamiNdOddB,
            ),
            (5, 1, _) => (
                layout(vec![Lit(&[0]), Rep(B000111, v)], m)?,
                Case::KasamiNdOddC,
            ),
            (5, 5, _) => (
                layout(vec![Lit(&[0, 1, 1]), Rep(B000111, v), Lit(&[0, 0])], m)?,
                Case::KasamiNdOddD,
            ),
            (3, _, 1) => (
                layout(vec![Rep(B000111, u), Rep(&y, s / 2), Lit(&[0])], m)?,
                Case::KasamiNdOddE,
            ),
            (3, _, 2) => (
                layout(
                    vec![
                        Lit(&[0, 1]),
                        Rep(B000111, u),
                        Rep(&y, (s - 1) / 2),
                        Lit(&[0, 0, 0]),
                        Rep(B011100, k),
                    ],
                    m,
                )?,
                Case::KasamiNdOddF,
            ),
            (3, _, 4) => (
                layout(
                    vec![
                        Lit(&[0, 0, 0]),
                        Rep(B011100, u),
                        Rep(&z, (s - 1) / 2),
                        Lit(&[0, 1, 1]),
                        Rep(B000111, k),
                        Lit(&[0]),
                    ],
                    m,
                )?,
                Case::KasamiNdOddG,
            ),
            (3, _, 5) => (
                layout(
                    vec![Lit(&[0, 1, 1, 0, 0]), Rep(B011100, u), Rep(&z, s / 2)],
                    m,
                )?,
                Case::KasamiNdOddH,
            ),
            other => {
                return Err(Error::Internal(format!(
                    "no layout for (e, m, t) mod 6 = {other:?}"
                )))
            }
        };
        let mut rows = vec![base];
        rows.extend(std::iter::repeat_n(lower, dn - 1));
        (rows, vec![base_carry; dn], case)
    };

    let formula_weight = kasami_case_weight(case, n64, d, sh.quotient as u64).expect("kasami case");
    Ok(Built {
        a: RMatrix::from_rows(n, r, rows)?,
        c: RMatrix::from_rows(n, r, carry_rows)?,
        case,
        formula_weight,
        e,
    })
}

/// `n/d` even (then `r` even, `3 ∤ n/d`, `d` even).
fn kasami_even_cols(n: u32, r: u64, d: u64) -> Result<Built> {
    let n64 = u64::from(n);
    let m = n64 / d;
    let mi = m as i64;
    let k = mi / 6;
    let (first, x_start, case) = match m % 6 {
        2 => (
            layout(vec![Lit(&[1, 1]), Rep(B110001, k)], m)?,
            1,
            Case::KasamiNdEven6k2,
        ),
        4 => (
            layout(vec![Lit(&[1, 0, 1, 1]), Rep(B100011, k)], m)?,
            0,
            Case::KasamiNdEven6k4,
        ),
        other => {
            return Err(Error::Internal(format!(
                "n/d ≡ {other} mod 6 is not invertible"
            )))
        }
    };
    let x = layout(vec![Alt(x_start, mi)], m)?;
    let y = layout(vec![Alt(1 - x_start, mi)], m)?;
    let mut rows = vec![first];
    rows.extend((0..d - 1).map(|i| if i % 2 == 0 { x.clone() } else { y.clone() }));
    // carry rows alternate, row 0 starting with 0 in case 6k+2 and with 1 in case 6k+4
    let c0 = 1 - x_start;
    let carry_rows = (0..d as i64)
        .map(|i| layout(vec![Alt((c0 + i) % 2, mi)], m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Built {
        a: RMatrix::from_rows(n, r, rows)?,
        c: RMatrix::from_rows(n, r, carry_rows)?,
        case,
        formula_weight: (n64 + 2) / 2,
        e: e_value(r, n64),
    })
}

/// Inverse of `K_r = 2^{2r} - 2^r + 1` modulo `2^n - 1`.
///
/// Dispatch, with `d = gcd(r, n)` and `e = e_value(r, n)`:
/// `n/d` even; else `e` even (reflect to `n - r`); else `d = 1`; else
/// `n/d ≡ 0 mod 3`; else the general odd-column layouts.
pub fn kasami_inverse(r: u64, n: u32) -> Result<InverseResult> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "kasami_inverse needs n >= 4, got {n}"
        )));
    }
    let mut warnings = Vec::new();
    let r = normalize_param(r, n, &mut warnings)?;
    if !kasami_invertible(r, n) {
        return Err(Error::NotInvertible {
            what: format!("K_{r}"),
            n,
        });
    }
    let n64 = u64::from(n);
    let d = n64.gcd(&r);
    if (n64 / d) % 2 == 0 {
        let built = kasami_even_cols(n, r, d)?;
        return finalize(ExponentFamily::Kasami(r), n, r, built, 0, warnings);
    }
    let e = e_value(r, n64);
    let (work_r, e, shift) = if e % 2 == 0 {
        let rr = n64 - r;
        (rr, e_value(rr, n64), -2 * r as i64)
    } else {
        (r, e, 0)
    };
    let built = kasami_odd_cols(n, work_r, d, e)?;
    finalize(ExponentFamily::Kasami(r), n, r, built, shift, warnings)
}

// ---------------------------------------------------------------- Bracken-Leander

/// Inverse of `2^{2r} + 2^r + 1` modulo `2^{4r} - 1`, `r` odd.
///
/// The `r × 4` matrix is `(1,1,1,0)` followed by alternating zero and
/// all-ones rows; the carry rows alternate `(2,2,2,2)` and `(1,1,1,1)`.
pub fn bl_inverse(r: u64) -> Result<InverseResult> {
    if r == 0 || r % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "Bracken-Leander needs odd r >= 1, got {r}"
        )));
    }
    let n = u32::try_from(4 * r)
        .map_err(|_| Error::InvalidParameter(format!("n = 4r too large for r={r}")))?;
    let mut rows = vec![vec![1, 1, 1, 0]];
    rows.extend((1..r).map(|i| if i % 2 == 1 { vec![0; 4] } else { vec![1; 4] }));
    let carry_rows = (0..r)
        .map(|i| if i % 2 == 0 { vec![2; 4] } else { vec![1; 4] })
        .collect();
    let built = Built {
        a: RMatrix::from_rows(n, r, rows)?,
        c: RMatrix::from_rows(n, r, carry_rows)?,
        case: Case::BrackenLeander,
        formula_weight: 2 * r + 1,
        e: e_value(r, u64::from(n)),
    };
    finalize(
        ExponentFamily::BrackenLeander(r),
        n,
        r,
        built,
        0,
        Vec::new(),
    )
}

// ---------------------------------------------------------------- degree, structure

/// Weight bounds for the inverse of an invertible Kasami exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBounds {
    pub lower: u64,
    /// Equal to `lower` when the weight is known exactly.
    pub upper: u64,
    pub exact: bool,
    /// `e` after reflection to an odd value.
    pub e: u64,
    /// For `gcd(r, n) = 1` and `n ≢ 0 mod 3`: whether `e = 3`, which is exactly
    /// when the lower bound is attained. `None` otherwise.
    pub lower_attained: Option<bool>,
}

/// Algebraic-degree bounds for `x ↦ x^{K_r^{-1}}`.
pub fn kasami_degree_bounds(r: u64, n: u32) -> Result<DegreeBounds> {
    if n < 2 || r == 0 || r % u64::from(n) == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2 and r ≢ 0 mod n (r={r}, n={n})"
        )));
    }
    if !kasami_invertible(r, n) {
        return Err(Error::NotInvertible {
            what: format!("K_{r}"),
            n,
        });
    }
    let n = u64::from(n);
    let r = r % n;
    let d = n.gcd(&r);
    let m = n / d;
    if m % 2 == 0 {
        let w = (n + 2) / 2;
        return Ok(DegreeBounds {
            lower: w,
            upper: w,
            exact: true,
            e: e_value(r, n),
            lower_attained: None,
        });
    }
    let mut e = e_value(r, n);
    if e % 2 == 0 {
        e = e_value(n - r, n);
    }
    let exact = |w| DegreeBounds {
        lower: w,
        upper: w,
        exact: true,
        e,
        lower_attained: None,
    };
    Ok(if d == 1 {
        match n % 3 {
            0 => exact((n + 1) / 2),
            1 => DegreeBounds {
                lower: (n + 2) / 3,
                upper: (n + 1) / 2,
                exact: false,
                e,
                lower_attained: Some(e == 3),
            },
            _ => DegreeBounds {
                lower: (n + 1) / 3,
                upper: (n + 1) / 2,
                exact: false,
                e,
                lower_attained: Some(e == 3),
            },
        }
    } else {
        match m % 3 {
            0 => exact((n + 4 - 3 * d) / 2),
            1 => DegreeBounds {
                lower: (n + 3 - d) / 3,
                upper: (n + 2 - d) / 2,
                exact: false,
                e,
                lower_attained: None,
            },
            _ => DegreeBounds {
                lower: (n + 3 - 2 * d) / 3,
                upper: (n + 2 - d) / 2,
                exact: false,
                e,
                lower_attained: None,
            },
        }
    })
}

/// `K_r^{-1} ≡ 2^shift · K_kasami_param (mod 2^n - 1)` for `n = 5d`, `r = b·d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiveDStructure {
    pub n: u32,
    pub d: u64,
    pub shift: u64,
    pub kasami_param: u64,
    pub inverse: Residue,
}

/// For `d = r/b`, `n = 5d`, `5 ∤ b`, the inverse of `K_r` is a cyclic shift
/// of `K_d` or `K_{2d}`, chosen by `b mod 5`. The identity is re-verified
/// before returning.
pub fn kasami_five_d_structure(r: u64, b: u64) -> Result<FiveDStructure> {
    if r == 0 || b == 0 || r % b != 0 {
        return Err(Error::InvalidParameter(format!("b={b} must divide r={r}")));
    }
    if b % 5 == 0 {
        return Err(Error::InvalidParameter(format!("b={b} must be prime to 5")));
    }
    let d = r / b;
    let n = u32::try_from(5 * d).map_err(|_| Error::InvalidParameter("n = 5d too large".into()))?;
    let n64 = u64::from(n) as i128;
    let towards = (2 * d as i128 - 2 * r as i128).rem_euclid(n64) as u64;
    let (shift, kasami_param) = match b % 5 {
        1 => (2 * d, 2 * d),
        2 => (2 * d, d),
        3 => (towards, d),
        _ => (towards, 2 * d),
    };
    let shift = shift % u64::from(n);
    let k = family_exponent(&ExponentFamily::Kasami(kasami_param), n)?;
    let inverse = k.shift(shift as i64);
    let kr = family_exponent(&ExponentFamily::Kasami(r), n)?;
    if !mul_mod(&kr, &inverse)?.is_one() {
        return Err(Error::Internal(format!(
            "2^{shift}·K_{kasami_param} is not K_{r}^-1 mod 2^{n}-1"
        )));
    }
    Ok(FiveDStructure {
        n,
        d,
        shift,
        kasami_param,
        inverse,
    })
}

/// Every `r < n` whose Kasami inverse has weight 2, with that inverse:
/// exactly `r = b·n/3` for `b ∈ {1, 2}`, giving `2^{n-1} + 2^{n/3-1}` or
/// `2^{n-1} + 2^{2n/3-1}`.
pub fn weight_two_classification(n: u32) -> Result<Vec<(u64, Residue)>> {
    if n < 6 {
        return Err(Error::InvalidParameter(format!(
            "the classification needs n >= 6, got {n}"
        )));
    }
    let n64 = u64::from(n);
    let mut out = Vec::new();
    for r in 1..n64 {
        if (3 * r) % n64 != 0 {
            continue;
        }
        let b = 3 * r / n64;
        if b % 3 == 0 || r % b != 0 || !kasami_invertible(r, n) {
            continue;
        }
        let low = if b % 3 == 1 {
            n64 / 3 - 1
        } else {
            2 * n64 / 3 - 1
        };
        let v = Residue::pow2(n, n64 as i64 - 1)?.value() + Residue::pow2(n, low as i64)?.value();
        out.push((r, Residue::new(n, v)?));
    }
    Ok(out)
}
