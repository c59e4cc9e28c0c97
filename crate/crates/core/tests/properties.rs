use std::sync::OnceLock;

use ltphi_core::charp::{functor_v_const, q_power};
use ltphi_core::fields::{make_field, FieldElem, FiniteField};
use ltphi_core::lift0::CoeffRing;
use ltphi_core::localnum::{Extension, LocalInt, LocalRing, LocalRingDesc};
use ltphi_core::ltgroup::{standard_series, unramified_ring, LTData};
use ltphi_core::matrix::{self, Mat};
use ltphi_core::ring::Ring;
use ltphi_core::series::TruncSeries;
use ltphi_core::twotower::{projlim_reconstruct, LocalConstants, TwoTowerSystem};
use proptest::prelude::*;

fn lt3() -> &'static LTData {
    static LT: OnceLock<LTData> = OnceLock::new();
    LT.get_or_init(|| {
        let ring = unramified_ring(3, 1, 8).unwrap();
        LTData::new(&standard_series(&ring, &ring.from_i64(3), 3), 8).unwrap()
    })
}

fn f9_elem(i: u64) -> FieldElem {
    FieldElem::from_index(&make_field(3, 2).unwrap(), i % 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_ops_are_a_field(a in 0u64..81, b in 0u64..81, c in 0u64..81) {
        let k = make_field(3, 4).unwrap();
        let (a, b, c) = (FieldElem::from_index(&k, a), FieldElem::from_index(&k, b), FieldElem::from_index(&k, c));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).frobenius(1), a.frobenius(1).add(&b.frobenius(1)));
        if let Some(inv) = a.inv() {
            prop_assert!(a.mul(&inv).is_one());
        }
        // F_9 sits inside F_81 compatibly
        let small = f9_elem(b.index());
        let up = small.embed(&k).unwrap();
        prop_assert_eq!(up.mul(&up), small.mul(&small).embed(&k).unwrap());
    }

    #[test]
    fn endomorphisms_are_ring_homomorphisms(a in -40i64..40, b in -40i64..40) {
        let lt = lt3();
        let ring = lt.ring();
        let (ia, ib) = (ring.from_i64(a), ring.from_i64(b));
        let sa = lt.lt_mul(&ia).unwrap();
        let sb = lt.lt_mul(&ib).unwrap();
        let sum = lt.lt_mul(&ia.add(&ib)).unwrap();
        let via_law = lt.group_law().substitute(&sa, &sb, 8).unwrap();
        prop_assert!(sum.agrees(&via_law));
        let prod = lt.lt_mul(&ia.mul(&ib)).unwrap();
        prop_assert!(prod.agrees(&sa.compose(&sb, 8).unwrap()));
    }

    #[test]
    fn local_division_and_digits(a in 1i64..500, b in 1i64..500) {
        let desc = LocalRingDesc::eisenstein(&make_field(3, 1).unwrap(), &[vec![3], vec![0]], 6).unwrap();
        let x = LocalInt::from_int(&desc, a);
        let y = LocalInt::from_int(&desc, b);
        let digits = x.digits();
        prop_assert!(LocalInt::from_digits(&desc, &digits).sub(&x).is_zero());
        if y.is_unit() {
            let q = x.div(&y).unwrap();
            prop_assert!(q.mul(&y).sub(&x).is_zero());
        }
        prop_assert_eq!(x.mul(&y).valuation(), (x.valuation() + y.valuation()).min(6));
    }

    #[test]
    fn norm_is_multiplicative(a in 0u64..9, b in 0u64..9, c in 1i64..30) {
        let base = LocalRingDesc::unramified(&make_field(3, 1).unwrap(), 5).unwrap();
        let top = LocalRingDesc::unramified(&make_field(3, 2).unwrap(), 5).unwrap();
        let ext = Extension::new(&base, &top).unwrap();
        let x = LocalInt::teichmuller(&top, &f9_elem(a)).add(&LocalInt::from_int(&top, 3 * c));
        let y = LocalInt::teichmuller(&top, &f9_elem(b)).add(&LocalInt::one(&top));
        let lhs = ext.norm(&x.mul(&y));
        if let (Ok(l), Ok(nx), Ok(ny)) = (lhs, ext.norm(&x), ext.norm(&y)) {
            prop_assert!(l.sub(&nx.mul(&ny)).is_zero());
        }
    }

    #[test]
    fn v_solutions_satisfy_their_equation(entries in proptest::collection::vec(0u64..9, 4)) {
        let k = make_field(3, 2).unwrap();
        let a = Mat::from_rows(vec![
            vec![FieldElem::from_index(&k, entries[0]), FieldElem::from_index(&k, entries[1])],
            vec![FieldElem::from_index(&k, entries[2]), FieldElem::from_index(&k, entries[3])],
        ]).unwrap();
        let ring = FiniteField(k.clone());
        prop_assume!(!matrix::det(&ring, &a).unwrap().is_zero());
        let sol = functor_v_const(&a, 2).unwrap();
        prop_assert_eq!(sol.dimension(), 2);
        let big = FiniteField(sol.field.clone());
        let a_big = a.map(|x| x.embed(&sol.field).unwrap());
        for v in &sol.basis {
            let lhs: Vec<FieldElem> = v.iter().map(|x| x.frobenius(2)).collect();
            prop_assert_eq!(lhs, matrix::mul_vec(&big, &a_big, v).unwrap());
        }
    }

    #[test]
    fn reduction_intertwines_lifts(coeffs in proptest::collection::vec(0u64..4, 6)) {
        let lt = lt3();
        let top = LocalRingDesc::unramified(&make_field(3, 1).unwrap(), 8).unwrap();
        let gv = ltphi_core::charp::default_gamma_values(lt).unwrap();
        let a = CoeffRing::new(lt, &top, &gv).unwrap();
        let x = TruncSeries::from_terms(
            a.coefficients(),
            coeffs.iter().enumerate().map(|(i, &c)| (i as i64, LocalInt::from_int(&top, c as i64))),
            8,
        );
        let lhs = a.reduce(&a.phi_lift(&x).unwrap());
        prop_assert!(lhs.agrees(&q_power(&a.reduce(&x), 1)));
    }

    #[test]
    fn diagonal_limits_round_trip(coeffs in proptest::collection::vec(-20i64..20, 4)) {
        let sys = two_tower();
        let c: &LocalConstants = sys.constants();
        let w: Vec<(u32, LocalInt)> = coeffs.iter().enumerate().map(|(i, &v)| (i as u32, c.from_i64(v))).collect();
        let seq = sys.diagonal_varpi(&w, (-1, 2)).unwrap();
        let lim = projlim_reconstruct(sys, &seq).unwrap();
        let got = TruncSeries::from_terms(&c.ring, lim.terms.iter().map(|(k, v)| (*k as i64, v.clone())), 6);
        let want = TruncSeries::from_terms(&c.ring, w.iter().map(|(k, v)| (*k as i64, v.clone())), 6);
        prop_assert!(got.agrees(&want));
    }
}

fn two_tower() -> &'static TwoTowerSystem<LocalConstants> {
    static SYS: OnceLock<TwoTowerSystem<LocalConstants>> = OnceLock::new();
    SYS.get_or_init(|| {
        let f: LocalRing = unramified_ring(2, 1, 3).unwrap();
        let k = unramified_ring(2, 2, 3).unwrap();
        let lt_pi = LTData::new(&standard_series(&f, &f.from_i64(2), 2), 6).unwrap();
        let lt_varpi = LTData::new(&standard_series(&k, &k.from_i64(2), 4), 6).unwrap();
        let a = CoeffRing::new(&lt_pi, k.desc(), &[]).unwrap();
        let b = CoeffRing::new(&lt_varpi, k.desc(), &[]).unwrap();
        TwoTowerSystem::lifted(&a, &b, 6).unwrap()
    })
}
