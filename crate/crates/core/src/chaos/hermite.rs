//! Probabilists' Hermite polynomials and sparse multivariate polynomials in
//! the monomial basis; the bridge between chaos coefficients and ordinary
//! polynomial algebra.

use std::collections::BTreeMap;

/// He_n(z) with the probabilists' normalization: He_0 = 1, He_1 = z,
/// He_{n+1} = z He_n - n He_{n-1}; E[He_n(Z) He_m(Z)] = n! delta_{nm}.
pub fn hermite_value(n: usize, z: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => z,
        _ => {
            let mut prev = 1.0;
            let mut cur = z;
            for k in 1..n {
                let next = z * cur - k as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Monomial coefficients of He_n: index d holds the coefficient of z^d.
pub fn hermite_monomial_coeffs(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for k in 1..n {
        // next = z * cur - k * prev
        let mut next = vec![0.0; k + 2];
        for (d, &c) in cur.iter().enumerate() {
            next[d + 1] += c;
        }
        for (d, &c) in prev.iter().enumerate() {
            next[d] -= k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Sparse multivariate polynomial: exponent vector -> coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Polynomial {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: f64) -> Polynomial {
        let mut p = Polynomial::zero(dim);
        p.add_term(&vec![0; dim], c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, f64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> f64 {
        self.terms.get(exps).copied().unwrap_or(0.0)
    }

    pub fn add_term(&mut self, exps: &[u32], coef: f64) {
        debug_assert_eq!(exps.len(), self.dim);
        if coef == 0.0 {
            return;
        }
        let entry = self.terms.entry(exps.to_vec()).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.terms.remove(exps);
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, s: f64) {
        for (e, c) in other.terms.iter() {
            self.add_term(e, s * c);
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Polynomial::zero(self.dim);
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in other.terms.iter() {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&exps, ca * cb);
            }
        }
        out
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        debug_assert_eq!(z.len(), self.dim);
        let mut total = 0.0;
        for (exps, c) in self.terms.iter() {
            let mut term = *c;
            for (k, &e) in exps.iter().enumerate() {
                term *= z[k].powi(e as i32);
            }
            total += term;
        }
        total
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Term of maximal total degree (ties broken by the map order), used to
    /// peel a polynomial back into the Hermite basis.
    pub fn leading_term(&self) -> Option<(Vec<u32>, f64)> {
        let mut best: Option<(&Vec<u32>, f64)> = None;
        let mut best_deg = 0u32;
        for (e, &c) in self.terms.iter() {
            let deg: u32 = e.iter().sum();
            if best.is_none() || deg > best_deg {
                best = Some((e, c));
                best_deg = deg;
            }
        }
        best.map(|(e, c)| (e.clone(), c))
    }

    /// Drop terms with |coefficient| below the threshold.
    pub fn prune(&mut self, threshold: f64) {
        self.terms.retain(|_, v| v.abs() > threshold);
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_coeff_diff(&self, other: &Polynomial) -> f64 {
        let mut m = 0.0f64;
        for (e, c) in self.terms.iter() {
            m = m.max((c - other.coefficient(e)).abs());
        }
        for (e, c) in other.terms.iter() {
            m = m.max((self.coefficient(e) - c).abs());
        }
        m
    }

    /// prod_k He_{exps[k]}(z_k) expanded into monomials.
    pub fn hermite_product(dim: usize, exps: &[u32]) -> Polynomial {
        debug_assert_eq!(exps.len(), dim);
        let mut out = Polynomial::constant(dim, 1.0);
        for (k, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let coeffs = hermite_monomial_coeffs(e as usize);
            let mut uni = Polynomial::zero(dim);
            for (d, &c) in coeffs.iter().enumerate() {
                if c != 0.0 {
                    let mut exp = vec![0u32; dim];
                    exp[k] = d as u32;
                    uni.add_term(&exp, c);
                }
            }
            out = out.mul(&uni);
        }
        out
    }
}
