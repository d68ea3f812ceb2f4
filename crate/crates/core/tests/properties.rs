use mersexp::{
    canonical_form, check_carries, cyclotomic_canonical, cyclotomic_shift, ext_euclid_inverse,
    from_r_matrix, mul_mod, regular_from_r_ordered, solve_carries, to_r_matrix, verify_congruence,
    BitSequence, Error, ExponentFamily, FieldContext, PowerMap, ROrderedSeq, Residue,
    SignedPowerForm,
};
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

fn word(max_n: usize) -> impl Strategy<Value = BitSequence> {
    (2..=max_n)
        .prop_flat_map(|n| prop::collection::vec(0u8..=1, n))
        .prop_map(|mut bits| {
            if bits.iter().all(|&b| b == 1) {
                bits[0] = 0;
            }
            BitSequence::new(bits).unwrap()
        })
}

fn residue(max_n: u32) -> impl Strategy<Value = Residue> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<u32>(), n.div_ceil(32) as usize)
            .prop_map(move |digits| Residue::new(n, BigUint::new(digits)).unwrap())
    })
}

fn signed_form() -> impl Strategy<Value = SignedPowerForm> {
    prop::collection::vec((0u64..12, -2i64..=3), 1..5)
        .prop_filter_map("needs a positive value", |terms| {
            SignedPowerForm::new(terms).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn bits_round_trip(x in residue(80)) {
        let bits = x.to_bits();
        prop_assert_eq!(bits.len(), x.n() as usize);
        prop_assert_eq!(bits.weight(), x.weight());
        prop_assert_eq!(bits.to_residue(), x);
    }

    #[test]
    fn reduction_matches_plain_modulus(n in 2u32..100, digits in prop::collection::vec(any::<u32>(), 0..8)) {
        let v = BigUint::new(digits);
        let m = (BigUint::from(1u32) << n) - 1u32;
        prop_assert_eq!(Residue::new(n, v.clone()).unwrap().value().clone(), v % m);
    }

    #[test]
    fn inverse_times_value_is_one(x in residue(64)) {
        let m = (BigUint::from(1u32) << x.n()) - 1u32;
        match ext_euclid_inverse(x.value(), x.n()) {
            Ok(inv) => prop_assert!(mul_mod(&x, &inv).unwrap().is_one()),
            Err(Error::NotInvertible { .. }) => prop_assert!(x.value().gcd(&m) != BigUint::from(1u32)),
            Err(Error::InvalidParameter(_)) => prop_assert!(x.is_zero()),
            Err(e) => prop_assert!(false, "unexpected error {}", e),
        }
    }

    #[test]
    fn shift_is_multiplication_by_power_of_two(x in residue(64), i in -200i64..200) {
        let by_mul = mul_mod(&x, &Residue::pow2(x.n(), i).unwrap()).unwrap();
        prop_assert_eq!(cyclotomic_shift(&x, i), by_mul);
        prop_assert_eq!(cyclotomic_shift(&x, i).weight(), x.weight());
    }

    #[test]
    fn canonical_class_representative(x in residue(40), i in 0i64..40) {
        let c = cyclotomic_canonical(&x);
        prop_assert_eq!(cyclotomic_canonical(&cyclotomic_shift(&x, i)), c.clone());
        prop_assert!(c.value() <= x.value());
    }

    #[test]
    fn r_matrix_round_trip(a in word(48), r in 1u64..100) {
        let m = to_r_matrix(&a, r).unwrap();
        let d = (a.len() as u64).gcd(&r) as usize;
        prop_assert_eq!((m.rows(), m.cols()), (d, a.len() / d));
        prop_assert_eq!(m.entry_sum(), a.weight() as i64);
        prop_assert_eq!(from_r_matrix(&m).unwrap(), a);
    }

    #[test]
    fn r_ordering_round_trip(a in word(48), r in 1u64..100) {
        prop_assume!((a.len() as u64).gcd(&r) == 1);
        let seq = ROrderedSeq::from_bits(&a, r).unwrap();
        let row: Vec<u8> = to_r_matrix(&a, r).unwrap().row(0).iter().map(|&v| v as u8).collect();
        prop_assert_eq!(seq.entries(), row.as_slice());
        prop_assert_eq!(regular_from_r_ordered(&seq).unwrap(), a);
    }

    #[test]
    fn carries_exist_exactly_for_the_product(l in signed_form(), a in word(24), flip in any::<prop::sample::Index>()) {
        let n = a.n();
        let s = mul_mod(&l.residue(n).unwrap(), &a.to_residue()).unwrap();
        prop_assume!(!s.to_bits().as_slice().iter().all(|&b| b == 1) || s.is_zero());
        let s_bits = s.to_bits();
        let c = verify_congruence(&l, &a, &s_bits).unwrap();
        prop_assert!(check_carries(&l, &a, &s_bits, &c));
        prop_assert!(c.as_slice().iter().all(|v| l.carry_range().contains(v)));
        // summing the recurrence over i: Σc + wt(s) = (Σt)·wt(a)
        prop_assert_eq!(c.weight() + s_bits.weight() as i64, l.coefficient_sum() * a.weight() as i64);

        // a different target (other than the all-ones word, which also represents 0) is rejected
        let mut other = s_bits.as_slice().to_vec();
        let k = flip.index(other.len());
        other[k] ^= 1;
        if let Ok(other) = BitSequence::new(other) {
            prop_assert!(matches!(solve_carries(&l, &a, &other), Err(Error::Inconsistent(_))));
        }
    }

    #[test]
    fn family_forms_agree_with_values(r in 1u64..20, n in 2u32..60) {
        for f in [ExponentFamily::Gold(r), ExponentFamily::Kasami(r), ExponentFamily::BrackenLeander(r)] {
            let form = canonical_form(&f).unwrap();
            prop_assert_eq!(form.residue(n).unwrap(), mersexp::family_exponent(&f, n).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn difference_rows_are_even_and_sum_to_field_size(n in 2u32..9, l in 1u64..512, a in 1u32..512) {
        let ctx = FieldContext::new(n).unwrap();
        let l = BigUint::from(l % ((1 << n) - 1) + 1);
        let a = a % ((1 << n) - 1) + 1;
        let row = PowerMap::new(&l, ctx).unwrap().difference_row(a);
        prop_assert!(row.iter().all(|c| c % 2 == 0));
        prop_assert_eq!(row.iter().map(|&c| c as usize).sum::<usize>(), ctx.size());
    }

    #[test]
    fn power_map_is_multiplicative(n in 2u32..12, l in 1u64..4096, x in any::<u32>(), y in any::<u32>()) {
        let ctx = FieldContext::new(n).unwrap();
        let mask = (1u32 << n) - 1;
        let (x, y) = (x & mask, y & mask);
        let l = BigUint::from(l % u64::from(mask) + 1);
        prop_assert_eq!(ctx.pow(ctx.mul(x, y), &l), ctx.mul(ctx.pow(x, &l), ctx.pow(y, &l)));
    }
}
