use std::collections::BTreeSet;

use freeconv::ccm::{apply_ccm_to_shifted_poly, convolution_gap};
use freeconv::momentcalc::{
    cumulants_from_moments, cumulants_via_km, free_convolve_moment_vectors, free_convolve_moments, measure_cumulants,
    moments_from_cumulants, nc_moments_oracle,
};
use freeconv::sampling::random_hermitian;
use freeconv::scalar::{binomial, Scalar};
use freeconv::specialfn::{closed_form, dd_power, divided_difference, hyp2f1_terminating, hyp3f2_saalschutz, rising};
use freeconv::spectral::{embed_measure, HermitianMatrix, OmegaPair};
use freeconv::{CcmMoments, Cumulants, Measure, MomentVector, NodeList, Polynomial, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (-max_num..=max_num, 1..=max_den).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational(max_num: i64, max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_num, 1..=max_den, any::<bool>()).prop_map(|(n, d, neg)| q(if neg { -n } else { n }, d))
}

/// Atoms at quarter-integers in [-2, 2] with integer weights.
fn measure(max_atoms: usize) -> impl Strategy<Value = Measure> {
    prop::collection::vec((-8i64..=8, 1i64..=9), 1..=max_atoms)
        .prop_map(|atoms| Measure::new(atoms.into_iter().map(|(x, w)| (q(x, 4), q(w, 1)))).unwrap())
}

fn cumulants(order: usize) -> impl Strategy<Value = Cumulants> {
    prop::collection::vec(rational(4, 3), order).prop_map(Cumulants::new)
}

fn hermitian_pair(seed: u64, dim: usize) -> OmegaPair<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    OmegaPair::new(random_hermitian(&mut rng, dim), random_hermitian(&mut rng, dim)).unwrap()
}

fn commutator_trace(pair: &OmegaPair<f64>) -> f64 {
    let (a, b) = (pair.a().as_matrix(), pair.b().as_matrix());
    let ab = a.mul(b);
    a.mul(a).mul(b).mul(b).trace().re - ab.mul(&ab).trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classical_moments_are_binomial_sums(mu in measure(6), nu in measure(6)) {
        let c = mu.classical_convolve(&nu);
        for n in 0..=12u64 {
            let want = (0..=n).fold(q(0, 1), |acc, k| {
                acc + Rational::from_bigint(&binomial(n, k)) * mu.moment(k as usize) * nu.moment((n - k) as usize)
            });
            prop_assert_eq!(c.moment(n as usize), want);
        }
    }

    #[test]
    fn classical_convolution_is_commutative_and_associative(a in measure(4), b in measure(4), c in measure(4)) {
        prop_assert_eq!(a.classical_convolve(&b), b.classical_convolve(&a));
        prop_assert_eq!(
            a.classical_convolve(&b).classical_convolve(&c),
            a.classical_convolve(&b.classical_convolve(&c))
        );
    }

    #[test]
    fn scaling_multiplies_variance_and_cumulants(mu in measure(5), a in rational(7, 4)) {
        let scaled = mu.scale(&a);
        prop_assert_eq!(scaled.variance(), a.clone() * a.clone() * mu.variance());
        let (k, ks) = (measure_cumulants(&mu, 8), measure_cumulants(&scaled, 8));
        let mut power = q(1, 1);
        for n in 1..=8 {
            power = power * a.clone();
            prop_assert_eq!(ks.get(n), power.clone() * k.get(n));
        }
    }

    #[test]
    fn classical_support_is_minkowski_sum(mu in measure(5), nu in measure(5)) {
        let (s, t, c) = (mu.support(), nu.support(), mu.classical_convolve(&nu).support());
        prop_assert_eq!(c.lo, s.lo + t.lo);
        prop_assert_eq!(c.hi, s.hi + t.hi);
        let sums: BTreeSet<Rational> = mu
            .atoms()
            .iter()
            .flat_map(|x| nu.atoms().iter().map(move |y| x.x.clone() + y.x.clone()))
            .collect();
        let atoms: BTreeSet<Rational> = mu.classical_convolve(&nu).atoms().iter().map(|a| a.x.clone()).collect();
        prop_assert_eq!(atoms, sums);
    }

    #[test]
    fn moment_cumulant_round_trip(kappa in cumulants(10)) {
        let m = moments_from_cumulants(&kappa);
        prop_assert_eq!(cumulants_from_moments(&m), kappa.clone());
        prop_assert_eq!(cumulants_via_km(&m), kappa);
    }

    #[test]
    fn noncrossing_oracle_matches_transform(kappa in cumulants(12)) {
        prop_assert_eq!(nc_moments_oracle(&kappa).unwrap(), moments_from_cumulants(&kappa));
    }

    #[test]
    fn free_convolution_is_commutative_and_associative(a in measure(4), b in measure(4), c in measure(4)) {
        let (ma, mb, mc) = (
            MomentVector::from_measure(&a, 10),
            MomentVector::from_measure(&b, 10),
            MomentVector::from_measure(&c, 10),
        );
        prop_assert_eq!(free_convolve_moment_vectors(&ma, &mb), free_convolve_moment_vectors(&mb, &ma));
        prop_assert_eq!(
            free_convolve_moment_vectors(&free_convolve_moment_vectors(&ma, &mb), &mc),
            free_convolve_moment_vectors(&ma, &free_convolve_moment_vectors(&mb, &mc))
        );
    }

    #[test]
    fn first_three_moments_agree_and_even_moments_order(mu in measure(5), nu in measure(5)) {
        let classical = mu.classical_convolve(&nu);
        let free = free_convolve_moments(&mu, &nu, 16);
        for n in 1..=3 {
            prop_assert_eq!(classical.moment(n), free.get(n));
        }
        for k in 1..=8 {
            prop_assert!(classical.moment(2 * k) >= free.get(2 * k));
        }
    }

    #[test]
    fn quartic_gap_is_nonpositive_and_strict(mu in measure(5), nu in measure(5), a in nonzero_rational(2, 2), b in nonzero_rational(2, 2)) {
        let p = Polynomial::scaled_monomial(q(-1, 1), 4);
        let gap = convolution_gap(&mu, &nu, &a, &b, &p).unwrap();
        prop_assert!(gap <= q(0, 1));
        if mu.variance() > q(0, 1) && nu.variance() > q(0, 1) {
            prop_assert!(gap < q(0, 1));
        }
    }

    #[test]
    fn gap_scaling_covariance(mu in measure(4), nu in measure(4), a in nonzero_rational(2, 2), b in nonzero_rational(2, 2),
                              lambda in nonzero_rational(3, 2), coeffs in prop::collection::vec(rational(3, 2), 5..=9)) {
        let p = Polynomial::new(coeffs);
        let base = convolution_gap(&mu, &nu, &a, &b, &p).unwrap();
        // λμ with a/λ leaves aμ fixed and rescales the denominator by λ²
        let moved = convolution_gap(&mu.scale(&lambda), &nu, &(a.clone() / lambda.clone()), &b, &p).unwrap();
        prop_assert_eq!(moved, base.clone() * lambda.clone() * lambda.clone());
        // (λa, λb) on p equals (a, b) on p(λ t) up to λ⁴
        let stretched = convolution_gap(&mu, &nu, &(a.clone() * lambda.clone()), &(b.clone() * lambda.clone()), &p).unwrap();
        let p_lambda = p.compose_affine(&lambda, &q(0, 1));
        let l4 = lambda.clone() * lambda.clone() * lambda.clone() * lambda.clone();
        prop_assert_eq!(stretched * l4, convolution_gap(&mu, &nu, &a, &b, &p_lambda).unwrap());
        prop_assert_eq!(apply_ccm_to_shifted_poly(&mu, &nu, &a, &b, &p_lambda).unwrap(),
                        convolution_gap(&mu, &nu, &a, &b, &p_lambda).unwrap());
    }

    #[test]
    fn ccm_tables_are_positive(mu in measure(4), nu in measure(4)) {
        let t = CcmMoments::series(&mu, &nu, 6);
        prop_assert!(t.is_positive_on(&mu.support(), &nu.support(), 3).unwrap());
        prop_assert_eq!(t.get(0, 0), mu.variance() * nu.variance() / q(12, 1));
    }

    #[test]
    fn divided_difference_recurrence(nodes in prop::collection::btree_set(-20i64..=20, 2..=9),
                                     values in prop::collection::vec(rational(9, 5), 9)) {
        let x: Vec<Rational> = nodes.iter().map(|&n| q(n, 3)).collect();
        let k = x.len();
        let f = &values[..k];
        let dd = |lo: usize, hi: usize| divided_difference(&NodeList::new(x[lo..hi].to_vec()).unwrap(), &f[lo..hi]).unwrap();
        prop_assert_eq!(dd(0, k), (dd(1, k) - dd(0, k - 1)) / (x[k - 1].clone() - x[0].clone()));
        for n in 0..=12usize {
            let powers: Vec<Rational> = x.iter().map(|t| t.powu(n)).collect();
            prop_assert_eq!(divided_difference(&NodeList::new(x.clone()).unwrap(), &powers).unwrap(), dd_power(&NodeList::new(x.clone()).unwrap(), n));
        }
    }

    #[test]
    fn terminating_summations(a in rational(12, 5), b in rational(12, 5), c in rational(12, 5), n in 0usize..=10) {
        // a pole-free c: c is not an integer in [-9, 0]
        prop_assume!(!(c.is_integer() && c <= q(0, 1) && c > q(-10, 1)));
        prop_assert_eq!(hyp2f1_terminating(&a, n, &c).unwrap(), closed_form::chu_vandermonde(&a, n, &c));
        let cab = c.clone() - a.clone() - b.clone();
        prop_assume!(rising(&cab, n) != q(0, 1));
        prop_assert_eq!(hyp3f2_saalschutz(&a, &b, n, &c).unwrap(), closed_form::saalschutz(&a, &b, n, &c));
    }

    #[test]
    fn omega_is_nonnegative_with_symmetric_trace_moments(seed in any::<u64>(), dim in 2usize..=4) {
        let pair = hermitian_pair(seed, dim);
        let swapped = OmegaPair::new(pair.b().clone(), pair.a().clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let ((alo, ahi), (blo, bhi)) = (pair.a_hull(), pair.b_hull());
        for _ in 0..50 {
            let (a, b) = (rng.random_range(alo - 0.5..=ahi + 0.5), rng.random_range(blo - 0.5..=bhi + 0.5));
            prop_assert!(pair.density(a, b).unwrap() >= 0.0);
        }
        let c = pair.trace_moment(0, 0).unwrap();
        prop_assert!((c - commutator_trace(&pair) / 6.0).abs() <= 1e-12 * (1.0 + c.abs()));
        for k in 0..=3 {
            for l in 0..=3 {
                let (x, y) = (pair.trace_moment(k, l).unwrap(), swapped.trace_moment(l, k).unwrap());
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
            }
        }
    }

    #[test]
    fn embedding_density_is_bounded_and_lives_on_unit_b_range(mu in measure(5), seed in any::<u64>()) {
        prop_assume!(!mu.is_degenerate());
        let pair = embed_measure::<f64, _>(&mu).omega_pair().unwrap();
        let (lo, hi) = pair.a_hull();
        let (blo, bhi) = pair.b_hull();
        prop_assert!(blo >= -1e-12 && bhi <= 1.0 + 1e-12);
        let bound = (hi - lo) / std::f64::consts::PI;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let (a, b) = (rng.random_range(lo..=hi), rng.random_range(-0.5..=1.5));
            let w = pair.density(a, b).unwrap();
            prop_assert!(w <= bound * (1.0 + 1e-12));
            if !(0.0..=1.0).contains(&b) {
                prop_assert_eq!(w, 0.0);
            }
            prop_assert!(pair.nonreal_pair_count(a, b).unwrap() <= 1);
        }
    }
}

#[test]
fn omega_vanishes_exactly_for_commuting_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let diag = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..4).map(|_| rng.random_range(-1.0..=1.0)).collect() };
        let pair = OmegaPair::new(HermitianMatrix::diagonal(&diag(&mut rng)), HermitianMatrix::diagonal(&diag(&mut rng))).unwrap();
        for _ in 0..1000 {
            let (a, b) = (rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
            assert!(pair.density(a, b).unwrap() <= 1e-12);
        }
    }
    // non-commuting pairs carry mass (1/6)(tr A²B² - tr ABAB) > 0
    for seed in 0..5 {
        let pair = hermitian_pair(seed, 3);
        let (a, b) = (pair.a().as_matrix(), pair.b().as_matrix());
        assert!(a.mul(b).sub(&b.mul(a)).frobenius_norm() > 1e-12);
        assert!(pair.trace_moment(0, 0).unwrap() > 0.0);
    }
}
