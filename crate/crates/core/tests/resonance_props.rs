use crossing_core::resonance::{
    classify_dim3, decide_ntnr, enumerate_resonances, Case3, EigenData,
};
use crossing_core::GaussianRational;
use proptest::prelude::*;

const BRUTE_BOUND: u32 = 14;

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-12i64..=12, prop::sample::select(vec![1i64, 2, 3, 4, 5, 6]))
}

fn gaussian(real_only: bool) -> impl Strategy<Value = GaussianRational> {
    (small_rational(), small_rational(), 0u8..3).prop_map(move |((a, b), (c, d), kind)| {
        if real_only || kind == 0 {
            GaussianRational::ratio(a, b)
        } else {
            GaussianRational::from_parts(a, b, c, d)
        }
    })
}

/// Imaginary parts drawn from a few values so cancellations actually occur.
fn structured() -> impl Strategy<Value = GaussianRational> {
    (small_rational(), prop::sample::select(vec![0i64, 0, 1, -1, 2, -2]))
        .prop_map(|((a, b), im)| GaussianRational::from_parts(a, b, im, 1))
}

fn check_against_enumeration(mu: Vec<GaussianRational>) -> Result<(), TestCaseError> {
    let eigen = EigenData::new(mu).unwrap();
    let decision = decide_ntnr(&eigen);
    let brute = enumerate_resonances(&eigen, BRUTE_BOUND).unwrap().negative;
    prop_assert!(decision.exact);
    if decision.holds {
        prop_assert!(brute.is_none(), "enumeration found {:?}", brute);
    } else {
        let w = decision.witness.clone().expect("failing verdict carries a witness");
        let k = w.k();
        prop_assert_eq!(eigen.pairing(&k), GaussianRational::from_integer(w.q));
        prop_assert!(w.q >= 1 && w.k_degree() >= 0);
        if (w.k_degree() as u32) <= BRUTE_BOUND {
            prop_assert_eq!(brute, Some(w));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ntnr_matches_enumeration_n2(a in gaussian(false), b in gaussian(false)) {
        check_against_enumeration(vec![a, b])?;
    }

    #[test]
    fn ntnr_matches_enumeration_n2_structured(a in structured(), b in structured()) {
        check_against_enumeration(vec![a, b])?;
    }

    #[test]
    fn ntnr_matches_enumeration_n3(a in structured(), b in structured(), c in structured()) {
        check_against_enumeration(vec![a, b, c])?;
    }

    #[test]
    fn ntnr_matches_enumeration_n1(a in gaussian(false)) {
        check_against_enumeration(vec![a])?;
    }

    #[test]
    fn ntnr_is_permutation_invariant(a in structured(), b in structured(), c in structured()) {
        let d1 = decide_ntnr(&EigenData::new(vec![a.clone(), b.clone(), c.clone()]).unwrap());
        let d2 = decide_ntnr(&EigenData::new(vec![c, a, b]).unwrap());
        prop_assert_eq!(d1.holds, d2.holds);
    }

    #[test]
    fn classify3_swap_symmetry(l in gaussian(false), m in gaussian(false)) {
        let a = classify_dim3(&l, &m);
        let b = classify_dim3(&m, &l);
        prop_assert_eq!(a.case, b.case);
        prop_assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn classify3_consistent_with_ntnr(l in gaussian(false), m in gaussian(false)) {
        let c = classify_dim3(&l, &m);
        let holds = decide_ntnr(&EigenData::new(vec![l, m]).unwrap()).holds;
        match c.case {
            Case3::SiegelReal3a | Case3::SiegelReal3b => {
                prop_assert!(!holds);
                prop_assert!(c.witness.is_some());
            }
            Case3::SiegelNonreal | Case3::SiegelRealClassified => {
                prop_assert!(holds);
                prop_assert!(c.witness.is_none());
            }
            Case3::Poincare => prop_assert!(c.witness.is_none()),
        }
    }

    #[test]
    fn resonant_list_is_exact(a in gaussian(true), b in gaussian(false)) {
        let eigen = EigenData::new(vec![a, b]).unwrap();
        let report = enumerate_resonances(&eigen, 6).unwrap();
        for r in &report.resonant {
            prop_assert_eq!(eigen.pairing(&r.k), GaussianRational::from_integer(r.s));
            prop_assert!(r.s <= 0 && r.x_exp == -r.s);
            prop_assert!(r.k.iter().sum::<i32>() >= 1);
        }
    }
}

#[test]
fn poincare_does_not_imply_ntnr() {
    // Both eigenvalues positive rationals: outside the Siegel domain, yet
    // K = (2, 0) gives ⟨μ,K⟩ = 1.
    let l = GaussianRational::ratio(1, 2);
    let m = GaussianRational::from_integer(1);
    assert_eq!(classify_dim3(&l, &m).case, Case3::Poincare);
    assert!(!decide_ntnr(&EigenData::new(vec![l, m]).unwrap()).holds);
}
