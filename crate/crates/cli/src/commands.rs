use std::fs;
use std::path::Path;

use clap::ValueEnum;
use freeconv::ccm::{ccm_density_grid, ccm_moments_spectral};
use freeconv::momentcalc::{free_convolve_moments, measure_cumulants};
use freeconv::scalar::format_rational;
use freeconv::spectral::{embed_measure, omega_measure_grid};
use freeconv::{CcmMoments, Measure, Rational, Spacing};
use serde_json::json;

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConvolveMode {
    Classical,
    Free,
}

/// Grid node placement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Nodes {
    /// Equally spaced, box edges included.
    Uniform,
    /// Chebyshev extreme points `lo + (hi - lo)(1 - cos(πi/(n-1)))/2`.
    Cosine,
}

impl From<Nodes> for Spacing {
    fn from(n: Nodes) -> Spacing {
        match n {
            Nodes::Uniform => Spacing::Uniform,
            Nodes::Cosine => Spacing::Cosine,
        }
    }
}

/// How the comparison-measure moments are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Exact Gegenbauer series of `I_l` functionals.
    Series,
    /// Exact free-cumulant difference formula.
    Cumulants,
    /// Floating point, every `I_l` by quadrature of the eigenvalue density.
    Spectral,
}

pub fn read_measure(path: &Path) -> CliResult<Measure> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Measure::from_json(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Parses `NAxNB`, both at least 2.
pub fn parse_grid(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Input(format!("grid must look like 64x64 with sizes >= 2, got {s:?}"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let na: usize = a.trim().parse().map_err(|_| bad())?;
    let nb: usize = b.trim().parse().map_err(|_| bad())?;
    if na < 2 || nb < 2 {
        return Err(bad());
    }
    Ok((na, nb))
}

pub fn check_tolerance(tol: f64) -> CliResult<f64> {
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError::Input(format!("tolerance must be positive, got {tol}")))
    }
}

fn join_rationals<'a>(values: impl IntoIterator<Item = &'a Rational>) -> String {
    let parts: Vec<String> = values.into_iter().map(format_rational).collect();
    parts.join(" ") + "\n"
}

/// `m_1 .. m_N` on one line.
pub fn moments(mu: &Measure, order: usize) -> String {
    join_rationals(&mu.moments(order)[1..])
}

/// `κ_1 .. κ_N` on one line.
pub fn cumulants(mu: &Measure, order: usize) -> String {
    join_rationals(measure_cumulants(mu, order).as_slice())
}

/// Classical mode prints the atoms of `μ * ν` (as `x:p` pairs or measure
/// JSON); free mode prints the moments of `μ ⊞ ν` to order `N`.
pub fn convolve(mu: &Measure, nu: &Measure, mode: ConvolveMode, order: usize, as_json: bool) -> String {
    match mode {
        ConvolveMode::Classical => {
            let c = mu.classical_convolve(nu);
            if as_json {
                c.to_json() + "\n"
            } else {
                format!("{c}\n")
            }
        }
        ConvolveMode::Free => join_rationals(free_convolve_moments(mu, nu, order).as_slice()),
    }
}

/// Moment table of `m̃_{μ,ν}` as JSON.
pub fn ccm_moments(mu: &Measure, nu: &Measure, order: usize, route: Route, tol: f64) -> CliResult<String> {
    let text = match route {
        Route::Series => CcmMoments::series(mu, nu, order).to_json(),
        Route::Cumulants => CcmMoments::via_cumulants(mu, nu, order).to_json(),
        Route::Spectral => {
            let table: Vec<Vec<f64>> = ccm_moments_spectral(mu, nu, order, check_tolerance(tol)?)?;
            let entries: Vec<_> = (0..=order)
                .flat_map(|i| (0..=order).map(move |j| (i, j)))
                .map(|(i, j)| json!({"nmu": i, "nnu": j, "value": format!("{:.16e}", table[i][j])}))
                .collect();
            json!({"order": order, "entries": entries}).to_string()
        }
    };
    Ok(text + "\n")
}

/// `w_{μ,ν}` on an `na × nb` grid as CSV `t_mu,t_nu,w`.
pub fn ccm_grid(mu: &Measure, nu: &Measure, na: usize, nb: usize, nodes: Nodes, tol: f64) -> CliResult<String> {
    let grid = ccm_density_grid::<f64, _>(mu, nu, na, nb, nodes.into(), check_tolerance(tol)?)?;
    Ok(grid.to_csv(["t_mu", "t_nu", "w"]))
}

/// `ω_μ` on an `na × nb` grid over `Conv(supp μ) × [0, 1]` as CSV `a,b,omega`.
pub fn omega_grid(mu: &Measure, na: usize, nb: usize, nodes: Nodes) -> CliResult<String> {
    let grid = omega_measure_grid(&embed_measure::<f64, _>(mu), na, nb, nodes.into())?;
    Ok(grid.to_csv(["a", "b", "omega"]))
}

/// `∫∫ a^k b^l ω_μ` for `k, l ≤ kmax` from the trace formula and from
/// quadrature, as CSV `k,l,trace,quadrature`.
pub fn omega_moments(mu: &Measure, kmax: usize, tol: f64) -> CliResult<String> {
    let pair = embed_measure::<f64, _>(mu).omega_pair()?;
    let quad = pair.quadrature_moments(kmax, kmax, check_tolerance(tol)?)?;
    let mut out = String::from("k,l,trace,quadrature\n");
    for (k, row) in quad.iter().enumerate() {
        for (l, q) in row.iter().enumerate() {
            let t = pair.trace_moment(k, l)?;
            out.push_str(&format!("{k},{l},{t:.16e},{q:.16e}\n"));
        }
    }
    Ok(out)
}
