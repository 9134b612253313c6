//! Symmetric coefficient tensors over the truncated eigenbasis.
//!
//! A kernel of order n over N modes stores one value per sorted multi-index
//! (j_1 <= ... <= j_n, 0-based); that value is the common dense entry of the
//! symmetric tensor on the whole permutation orbit. Inner products weight
//! each stored entry by its orbit size n!/prod(multiplicities!).

use std::collections::BTreeMap;

use crate::error::{CdmeError, Result};

pub type MultiIndex = Vec<usize>;

/// n!/prod_k m_k! for a sorted multi-index: the number of distinct
/// permutations of its entries.
pub fn orbit_size(sorted: &[usize]) -> f64 {
    let n = sorted.len();
    let mut numer: u128 = 1;
    for k in 1..=n {
        numer *= k as u128;
    }
    let mut denom: u128 = 1;
    let mut run = 1u128;
    for i in 1..n {
        if sorted[i] == sorted[i - 1] {
            run += 1;
            denom *= run;
        } else {
            run = 1;
        }
    }
    (numer / denom) as f64
}

pub fn factorial(n: usize) -> f64 {
    let mut f: u128 = 1;
    for k in 1..=n {
        f *= k as u128;
    }
    f as f64
}

pub fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    let mut value: u128 = 1;
    for i in 0..r.min(n - r) {
        value = value * (n - i) as u128 / (i + 1) as u128;
    }
    value as f64
}

/// All sorted multi-indices of the given order with entries in 0..dim,
/// in lexicographic order.
pub fn sorted_multi_indices(dim: usize, order: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0usize; order];
    loop {
        out.push(current.clone());
        // Advance the rightmost entry that can still grow.
        let mut pos = order;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if current[pos] + 1 < dim {
                let v = current[pos] + 1;
                for item in current.iter_mut().skip(pos) {
                    *item = v;
                }
                break;
            }
        }
    }
}

/// Dense order-n tensor over dim modes, row-major; the building block for
/// symmetrization, contraction and the brute-force oracles in tests.
#[derive(Debug, Clone)]
pub struct DenseTensor {
    pub dim: usize,
    pub order: usize,
    pub data: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dim: usize, order: usize) -> DenseTensor {
        DenseTensor {
            dim,
            order,
            data: vec![0.0; dim.pow(order as u32)],
        }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order);
        let mut off = 0;
        for &i in idx {
            debug_assert!(i < self.dim);
            off = off * self.dim + i;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    pub fn add(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] += value;
    }

    /// Iterate all index tuples in row-major order.
    pub fn tuples(&self) -> TupleIter {
        TupleIter {
            dim: self.dim,
            current: vec![0; self.order],
            done: self.dim == 0 && self.order > 0,
            started: false,
        }
    }
}

pub struct TupleIter {
    dim: usize,
    current: Vec<usize>,
    done: bool,
    started: bool,
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        let mut pos = self.current.len();
        loop {
            if pos == 0 {
                self.done = true;
                return None;
            }
            pos -= 1;
            self.current[pos] += 1;
            if self.current[pos] < self.dim {
                break;
            }
            self.current[pos] = 0;
        }
        Some(self.current.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricKernel {
    dim: usize,
    order: usize,
    coeffs: BTreeMap<MultiIndex, f64>,
}

impl SymmetricKernel {
    pub fn zero(dim: usize, order: usize) -> SymmetricKernel {
        SymmetricKernel {
            dim,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    /// Order-0 kernel holding a single scalar.
    pub fn scalar(dim: usize, value: f64) -> SymmetricKernel {
        let mut k = SymmetricKernel::zero(dim, 0);
        k.set(&[], value);
        k
    }

    /// Order-1 kernel from a coefficient list.
    pub fn from_coefficients(coeffs: &[f64]) -> SymmetricKernel {
        let mut k = SymmetricKernel::zero(coeffs.len(), 1);
        for (i, &v) in coeffs.iter().enumerate() {
            k.set(&[i], v);
        }
        k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Dense entry at a (not necessarily sorted) index tuple.
    pub fn get(&self, idx: &[usize]) -> f64 {
        debug_assert_eq!(idx.len(), self.order);
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).copied().unwrap_or(0.0)
    }

    /// Set the dense entry on the whole permutation orbit of `idx`.
    pub fn set(&mut self, idx: &[usize], value: f64) {
        debug_assert_eq!(idx.len(), self.order);
        let mut key = idx.to_vec();
        key.sort_unstable();
        if value == 0.0 {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    pub fn add(&mut self, idx: &[usize], value: f64) {
        let mut key = idx.to_vec();
        key.sort_unstable();
        let entry = self.coeffs.entry(key).or_insert(0.0);
        *entry += value;
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    pub fn n_entries(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|&v| v == 0.0)
    }

    pub fn scale(&mut self, s: f64) {
        for v in self.coeffs.values_mut() {
            *v *= s;
        }
    }

    pub fn add_scaled(&mut self, other: &SymmetricKernel, s: f64) {
        debug_assert_eq!(self.dim, other.dim);
        debug_assert_eq!(self.order, other.order);
        for (k, v) in other.coeffs.iter() {
            let entry = self.coeffs.entry(k.clone()).or_insert(0.0);
            *entry += s * v;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &SymmetricKernel) -> f64 {
        let mut m = 0.0f64;
        for (k, v) in self.coeffs.iter() {
            m = m.max((v - other.get(k)).abs());
        }
        for (k, v) in other.coeffs.iter() {
            m = m.max((self.get(k) - v).abs());
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.values().all(|v| v.is_finite())
    }

    /// Average of the dense entries over each permutation orbit: the
    /// symmetrization projector. Idempotent on already-symmetric input.
    pub fn symmetrize(dense: &DenseTensor) -> SymmetricKernel {
        let mut sums: BTreeMap<MultiIndex, f64> = BTreeMap::new();
        for tuple in dense.tuples() {
            let v = dense.get(&tuple);
            let mut key = tuple;
            key.sort_unstable();
            *sums.entry(key).or_insert(0.0) += v;
        }
        let mut kernel = SymmetricKernel::zero(dense.dim, dense.order);
        for (key, sum) in sums {
            let avg = sum / orbit_size(&key);
            if avg != 0.0 {
                kernel.coeffs.insert(key, avg);
            }
        }
        kernel
    }

    pub fn to_dense(&self) -> DenseTensor {
        let mut dense = DenseTensor::zeros(self.dim, self.order);
        for tuple in DenseTensor::zeros(self.dim, self.order).tuples() {
            let v = self.get(&tuple);
            if v != 0.0 {
                dense.set(&tuple, v);
            }
        }
        dense
    }

    /// r-fold contraction with `other` over shared basis slots followed by
    /// symmetrization; orthonormality reduces the contraction integrals to
    /// index matches.
    pub fn contract(&self, other: &SymmetricKernel, r: usize) -> Result<SymmetricKernel> {
        if self.dim != other.dim {
            return Err(CdmeError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if r > self.order.min(other.order) {
            return Err(CdmeError::ContractionOrder {
                r,
                n: self.order,
                m: other.order,
            });
        }
        let out_order = self.order + other.order - 2 * r;
        let mut dense = DenseTensor::zeros(self.dim, out_order);
        let left_free = self.order - r;
        let shared = DenseTensor::zeros(self.dim, r);

        for out_tuple in dense.tuples() {
            let (left_part, right_part) = out_tuple.split_at(left_free);
            let mut total = 0.0;
            for shared_tuple in shared.tuples() {
                let mut left_idx = Vec::with_capacity(self.order);
                left_idx.extend_from_slice(left_part);
                left_idx.extend_from_slice(&shared_tuple);
                let lv = self.get(&left_idx);
                if lv == 0.0 {
                    continue;
                }
                let mut right_idx = Vec::with_capacity(other.order);
                right_idx.extend_from_slice(&shared_tuple);
                right_idx.extend_from_slice(right_part);
                total += lv * other.get(&right_idx);
            }
            if total != 0.0 {
                dense.set(&out_tuple, total);
            }
        }
        Ok(SymmetricKernel::symmetrize(&dense))
    }

    /// Dense symmetric inner product: sum over all index tuples, realized as
    /// an orbit-weighted sum over the stored sorted entries.
    pub fn inner(&self, other: &SymmetricKernel) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        debug_assert_eq!(self.order, other.order);
        let mut s = 0.0;
        for (key, v) in self.coeffs.iter() {
            let w = other.coeffs.get(key).copied().unwrap_or(0.0);
            if w != 0.0 {
                s += orbit_size(key) * v * w;
            }
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn brute_force_symmetrize(dense: &DenseTensor) -> DenseTensor {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for rest in permutations(n - 1) {
                for pos in 0..=rest.len() {
                    let mut p = rest.clone();
                    p.insert(pos, n - 1);
                    out.push(p);
                }
            }
            out
        }
        let perms = permutations(dense.order);
        let mut out = DenseTensor::zeros(dense.dim, dense.order);
        for tuple in dense.tuples() {
            let mut s = 0.0;
            for p in &perms {
                let permuted: Vec<usize> = p.iter().map(|&i| tuple[i]).collect();
                s += dense.get(&permuted);
            }
            out.set(&tuple, s / perms.len() as f64);
        }
        out
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[]), 1.0);
        assert_eq!(orbit_size(&[0, 0]), 1.0);
        assert_eq!(orbit_size(&[0, 1]), 2.0);
        assert_eq!(orbit_size(&[0, 0, 1]), 3.0);
        assert_eq!(orbit_size(&[0, 1, 2]), 6.0);
        assert_eq!(orbit_size(&[0, 0, 1, 1]), 6.0);
    }

    #[test]
    fn sorted_index_enumeration_counts() {
        // C(dim + order - 1, order)
        assert_eq!(sorted_multi_indices(2, 3).len(), 4);
        assert_eq!(sorted_multi_indices(3, 2).len(), 6);
        assert_eq!(sorted_multi_indices(4, 0).len(), 1);
        assert_eq!(sorted_multi_indices(1, 12).len(), 1);
    }

    #[test]
    fn symmetrize_tensor_product_of_two_modes() {
        // xi_0 (x) xi_1: dense entry 1 at (0,1); the symmetrization puts 1/2
        // on the whole orbit.
        let mut dense = DenseTensor::zeros(2, 2);
        dense.set(&[0, 1], 1.0);
        let kernel = SymmetricKernel::symmetrize(&dense);
        assert_abs_diff_eq!(kernel.get(&[0, 1]), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(kernel.get(&[1, 0]), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(kernel.get(&[0, 0]), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn symmetrize_is_idempotent() {
        let mut dense = DenseTensor::zeros(2, 3);
        dense.set(&[0, 1, 1], 2.0);
        dense.set(&[1, 0, 0], -1.0);
        let once = SymmetricKernel::symmetrize(&dense);
        let twice = SymmetricKernel::symmetrize(&once.to_dense());
        assert_eq!(once, twice);
    }

    #[test]
    fn symmetrize_matches_brute_force_permutation_average() {
        let mut dense = DenseTensor::zeros(2, 3);
        let mut seed = 42u64;
        for tuple in DenseTensor::zeros(2, 3).tuples() {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let v = ((seed >> 33) as f64 / (1u64 << 31) as f64) - 0.5;
            dense.set(&tuple, v);
        }
        let kernel = SymmetricKernel::symmetrize(&dense);
        let oracle = brute_force_symmetrize(&dense);
        for tuple in dense.tuples() {
            assert_abs_diff_eq!(kernel.get(&tuple), oracle.get(&tuple), epsilon = 1e-14);
        }
    }

    #[test]
    fn contraction_examples() {
        // xi_0^{(x)2} contracted once with xi_0 gives xi_0.
        let mut h = SymmetricKernel::zero(2, 2);
        h.set(&[0, 0], 1.0);
        let g = SymmetricKernel::from_coefficients(&[1.0, 0.0]);
        let c = h.contract(&g, 1).unwrap();
        assert_abs_diff_eq!(c.get(&[0]), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.get(&[1]), 0.0, epsilon = 1e-15);

        // Symmetrized xi_0 (x) xi_1 contracted with xi_1 leaves (1/2) xi_0.
        let mut h = SymmetricKernel::zero(2, 2);
        h.set(&[0, 1], 0.5);
        let g = SymmetricKernel::from_coefficients(&[0.0, 1.0]);
        let c = h.contract(&g, 1).unwrap();
        assert_abs_diff_eq!(c.get(&[0]), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.get(&[1]), 0.0, epsilon = 1e-15);

        // r = 0 is the symmetrized tensor product.
        let a = SymmetricKernel::from_coefficients(&[1.0, 0.0]);
        let b = SymmetricKernel::from_coefficients(&[0.0, 1.0]);
        let prod = a.contract(&b, 0).unwrap();
        assert_abs_diff_eq!(prod.get(&[0, 1]), 0.5, epsilon = 1e-15);

        // Out-of-range contraction order is rejected.
        assert!(a.contract(&b, 2).is_err());
    }

    #[test]
    fn contraction_matches_dense_oracle() {
        // Random order-2 x order-2, r = 1, against an explicit dense loop.
        let mut seed = 7u64;
        let mut rand = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(99);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 0.5
        };
        let dim = 3;
        let mut ha = DenseTensor::zeros(dim, 2);
        let mut hb = DenseTensor::zeros(dim, 2);
        for tuple in DenseTensor::zeros(dim, 2).tuples() {
            ha.set(&tuple, rand());
            hb.set(&tuple, rand());
        }
        let a = SymmetricKernel::symmetrize(&ha);
        let b = SymmetricKernel::symmetrize(&hb);
        let c = a.contract(&b, 1).unwrap();

        let mut expected = DenseTensor::zeros(dim, 2);
        for x in 0..dim {
            for y in 0..dim {
                let mut s = 0.0;
                for shared in 0..dim {
                    s += a.get(&[x, shared]) * b.get(&[shared, y]);
                }
                expected.add(&[x, y], s);
            }
        }
        let expected = SymmetricKernel::symmetrize(&expected);
        assert!(c.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn inner_product_uses_orbit_weights() {
        let mut h = SymmetricKernel::zero(2, 2);
        h.set(&[0, 1], 0.5);
        // Dense tensor has entries 1/2 at (0,1) and (1,0): |h|^2 = 2 * 1/4.
        assert_abs_diff_eq!(h.norm_sq(), 0.5, epsilon = 1e-15);
    }
}
