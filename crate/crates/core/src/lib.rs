//! Inverses of Gold, Kasami and Bracken-Leander exponents modulo `2^n - 1`,
//! certified by the modular add-with-carry recurrence and cross-checked on
//! small fields.
//!
//! Layout:
//! * [`residue`]: arithmetic in `Z_{2^n-1}`, bit words, exponent families.
//! * [`carry`]: signed power forms and carry sequences.
//! * [`orderings`]: `r`-orderings and `r`-matrices.
//! * [`closed_form`]: the explicit inverses and their case analysis.
//! * [`sbox`]: GF(2^n) monomials, differential uniformity, the catalog.

pub mod carry;
pub mod closed_form;
pub mod error;
pub mod orderings;
pub mod residue;
pub mod sbox;

pub use carry::{
    all_carry_solutions, canonical_form, carry_constraints_check, check_carries, solve_carries,
    verify_congruence, CarryReport, CarrySequence, SignedPowerForm,
};
pub use closed_form::{
    bl_inverse, gold_inverse, gold_invertible, kasami_degree_bounds, kasami_five_d_structure,
    kasami_inverse, kasami_invertible, weight_two_classification, Case, CaseLabel, DegreeBounds,
    FiveDStructure, InverseResult,
};
pub use error::{Error, Result};
pub use orderings::{
    e_value, from_r_matrix, regular_from_r_ordered, to_r_matrix, RMatrix, ROrderedSeq,
};
pub use residue::{
    binary_weight, cyclotomic_canonical, cyclotomic_shift, ext_euclid_inverse, family_exponent,
    modulus, mul_mod, BitSequence, ExponentFamily, Residue,
};
pub use sbox::{
    catalog_lookup, differential_uniformity, is_apn, verify_compositional_inverse, CatalogEntry,
    FieldContext, PowerMap,
};
