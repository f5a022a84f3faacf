//! Divided differences, terminating hypergeometric sums and the Gegenbauer
//! polynomials `C_k^{3/2}` normalized by `C_k(1) = 1`.
//!
//! Hypergeometric values are always obtained by summing the terminating
//! series term by term. The closed forms in [`closed_form`] exist only so the
//! summation identities can be checked against them.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{factorial, Scalar};

/// Nodes `x_0..x_k` of a divided difference; repeats allowed, order kept.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeList<T> {
    nodes: Vec<T>,
}

impl<T: Scalar> NodeList<T> {
    pub fn new(nodes: Vec<T>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("node list is empty".into()));
        }
        Ok(NodeList { nodes })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.nodes
    }

    /// Order of the divided difference, `k` for `k + 1` nodes.
    pub fn order(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// `[x_0, .., x_k]_f = Σ_i f(x_i) / Π_{j≠i} (x_i - x_j)` for pairwise
/// distinct nodes.
pub fn divided_difference<T: Scalar>(nodes: &NodeList<T>, values: &[T]) -> Result<T> {
    let x = nodes.as_slice();
    if values.len() != x.len() {
        return Err(Error::InvalidArgument(format!(
            "{} values for {} nodes",
            values.len(),
            x.len()
        )));
    }
    let mut acc = T::zero();
    for (i, (xi, fi)) in x.iter().zip(values).enumerate() {
        let mut denom = T::one();
        for (j, xj) in x.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = xi.clone() - xj.clone();
            if d.is_zero() {
                return Err(Error::RepeatedNode(xi.to_string()));
            }
            denom = denom * d;
        }
        acc = acc + fi.clone() / denom;
    }
    Ok(acc)
}

/// `[x_0, .., x_k]_{t ↦ t^n}`: the complete homogeneous symmetric polynomial
/// of degree `n - k` in the nodes. Repeated nodes are fine; zero when `n < k`.
pub fn dd_power<T: Scalar>(nodes: &NodeList<T>, n: usize) -> T {
    let k = nodes.order();
    if n < k {
        return T::zero();
    }
    let degree = n - k;
    // h[j] = h_j(x_0..x_i) after processing node i
    let mut h = vec![T::zero(); degree + 1];
    h[0] = T::one();
    for x in nodes.as_slice() {
        for j in 1..=degree {
            h[j] = h[j].clone() + x.clone() * h[j - 1].clone();
        }
    }
    h[degree].clone()
}

/// Rising factorial `a^{(k)} = a (a+1) ··· (a+k-1)`.
pub fn rising<T: Scalar>(a: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * (a.clone() + T::from_i64(i as i64)))
}

/// Falling factorial `a_{(k)} = a (a-1) ··· (a-k+1)`.
pub fn falling<T: Scalar>(a: &T, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * (a.clone() - T::from_i64(i as i64)))
}

/// `pFq(upper..., -n; lower...; z)` summed over its `n + 1` nonzero terms.
///
/// Errors when a lower parameter's rising factorial hits zero inside the
/// summation range.
pub fn terminating_pfq<T: Scalar>(n: usize, upper: &[T], lower: &[T], z: &T) -> Result<T> {
    let minus_n = -T::from_i64(n as i64);
    let mut term = T::one();
    let mut acc = T::one();
    for k in 0..n {
        // ratio term_{k+1} / term_k
        let kk = T::from_i64(k as i64);
        let mut num = (minus_n.clone() + kk.clone()) * z.clone();
        for a in upper {
            num = num * (a.clone() + kk.clone());
        }
        let mut den = T::from_i64(k as i64 + 1);
        for b in lower {
            den = den * (b.clone() + kk.clone());
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator { term: k + 1 });
        }
        term = term * num / den;
        acc = acc + term.clone();
    }
    Ok(acc)
}

/// `₂F₁(a, -n; c; 1)` by direct summation.
pub fn hyp2f1_terminating<T: Scalar>(a: &T, n: usize, c: &T) -> Result<T> {
    terminating_pfq(n, std::slice::from_ref(a), std::slice::from_ref(c), &T::one())
}

/// `₃F₂(a, b, -n; c, 1 + a + b - c - n; 1)` by direct summation.
pub fn hyp3f2_saalschutz<T: Scalar>(a: &T, b: &T, n: usize, c: &T) -> Result<T> {
    let d = T::one() + a.clone() + b.clone() - c.clone() - T::from_i64(n as i64);
    terminating_pfq(n, &[a.clone(), b.clone()], &[c.clone(), d], &T::one())
}

/// `C_k^{3/2}(x) = ₂F₁(k+3, -k; 2; (1-x)/2)`.
pub fn gegenbauer_c32<T: Scalar>(k: usize, x: &T) -> T {
    let z = (T::one() - x.clone()) / T::from_i64(2);
    terminating_pfq(k, &[T::from_i64(k as i64 + 3)], &[T::from_i64(2)], &z)
        .expect("lower parameter 2 never vanishes")
}

/// `C_k^{3/2}` as a polynomial in `x`, expanded from the same hypergeometric
/// representation.
pub fn gegenbauer_c32_poly<T: Scalar>(k: usize) -> Polynomial<T> {
    let half = T::from_ratio(1, 2);
    // (1 - x)/2
    let z = Polynomial::new(vec![half.clone(), -half]);
    let a = T::from_i64(k as i64 + 3);
    let minus_k = -T::from_i64(k as i64);
    let two = T::from_i64(2);
    let mut out = Polynomial::zero();
    let mut z_pow = Polynomial::constant(T::one());
    for j in 0..=k {
        let coeff = rising(&a, j) * rising(&minus_k, j)
            / (rising(&two, j) * T::from_bigint(&factorial(j as u64)));
        out = &out + &z_pow.scale(&coeff);
        z_pow = &z_pow * &z;
    }
    out
}

/// `Σ_l (2l+1)(-1)^l (n1)_(l)/(n1+l+1)! · (n2)_(l)/(n2+l+1)!`.
///
/// Terms with `l > min(n1, n2)` vanish through the falling factorials.
pub fn identity_lemma_sum<T: Scalar>(n1: usize, n2: usize) -> T {
    let a = T::from_i64(n1 as i64);
    let b = T::from_i64(n2 as i64);
    (0..=n1.min(n2)).fold(T::zero(), |acc, l| {
        let mut term = T::from_i64(2 * l as i64 + 1) * falling(&a, l) * falling(&b, l)
            / T::from_bigint(&(factorial((n1 + l + 1) as u64) * factorial((n2 + l + 1) as u64)));
        if l % 2 == 1 {
            term = -term;
        }
        acc + term
    })
}

/// Closed-form right-hand sides of the summation identities. Test oracles.
pub mod closed_form {
    use super::rising;
    use crate::scalar::{factorial, Scalar};

    /// Chu–Vandermonde: `(c - a)^{(n)} / c^{(n)}`.
    pub fn chu_vandermonde<T: Scalar>(a: &T, n: usize, c: &T) -> T {
        rising(&(c.clone() - a.clone()), n) / rising(c, n)
    }

    /// Saalschütz: `(c-a)^{(n)} (c-b)^{(n)} / (c^{(n)} (c-a-b)^{(n)})`.
    pub fn saalschutz<T: Scalar>(a: &T, b: &T, n: usize, c: &T) -> T {
        rising(&(c.clone() - a.clone()), n) * rising(&(c.clone() - b.clone()), n)
            / (rising(c, n) * rising(&(c.clone() - a.clone() - b.clone()), n))
    }

    /// `1 / (n1 + n2 + 1)!`
    pub fn identity_lemma<T: Scalar>(n1: usize, n2: usize) -> T {
        T::one() / T::from_bigint(&factorial((n1 + n2 + 1) as u64))
    }

    /// `8 / ((2k+3)(k+1)(k+2))`, the squared norm of `C_k^{3/2}` under `1 - x²`.
    pub fn gegenbauer_norm<T: Scalar>(k: usize) -> T {
        let k = k as i64;
        T::from_i64(8) / T::from_i64((2 * k + 3) * (k + 1) * (k + 2))
    }
}
