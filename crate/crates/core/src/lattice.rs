//! Integer lattice reduction.
//!
//! Every graded piece of a truncated ring is a finitely generated abelian
//! group `Z^n / L`, where `L` is spanned by the relation products of that
//! weight. [`Echelon`] keeps a row-style Hermite normal form of `L`; reducing
//! a coefficient vector against it yields the canonical coset representative
//! (each pivot coordinate lands in `[0, pivot)`), which is what makes equality
//! in the quotient decidable even in the presence of torsion.

use crate::Int;

/// Row echelon (Hermite) form of the lattice spanned by a list of generators.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Vec<Int>>,
    pivots: Vec<usize>,
    /// `rows[i] = sum_j transform[i][j] * generators[j]`, when tracked.
    transform: Option<Vec<Vec<Int>>>,
    /// Integer relations among the generators, when tracked.
    kernel: Vec<Vec<Int>>,
}

impl Echelon {
    pub fn new(generators: Vec<Vec<Int>>, ncols: usize) -> Self {
        Self::build(generators, ncols, false)
    }

    /// Like [`Echelon::new`], but also records how each echelon row is made
    /// from the input generators, which enables [`Echelon::solve`] and
    /// [`Echelon::kernel`].
    pub fn with_transform(generators: Vec<Vec<Int>>, ncols: usize) -> Self {
        Self::build(generators, ncols, true)
    }

    fn build(mut a: Vec<Vec<Int>>, ncols: usize, track: bool) -> Self {
        let m = a.len();
        for row in &a {
            assert_eq!(row.len(), ncols, "generator length does not match column count");
        }
        let mut u: Vec<Vec<Int>> = if track {
            (0..m)
                .map(|i| {
                    let mut e = vec![0; m];
                    e[i] = 1;
                    e
                })
                .collect()
        } else {
            Vec::new()
        };
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            if r == m {
                break;
            }
            loop {
                let best = (r..m)
                    .filter(|&i| a[i][col] != 0)
                    .min_by_key(|&i| a[i][col].unsigned_abs());
                let Some(p) = best else { break };
                a.swap(r, p);
                if track {
                    u.swap(r, p);
                }
                let mut clean = true;
                for i in r + 1..m {
                    if a[i][col] != 0 {
                        let q = a[i][col] / a[r][col];
                        axpy(&mut a, i, r, -q);
                        if track {
                            axpy(&mut u, i, r, -q);
                        }
                        if a[i][col] != 0 {
                            clean = false;
                        }
                    }
                }
                if clean {
                    if a[r][col] < 0 {
                        negate(&mut a[r]);
                        if track {
                            negate(&mut u[r]);
                        }
                    }
                    for i in 0..r {
                        let q = a[i][col].div_euclid(a[r][col]);
                        if q != 0 {
                            axpy(&mut a, i, r, -q);
                            if track {
                                axpy(&mut u, i, r, -q);
                            }
                        }
                    }
                    pivots.push(col);
                    r += 1;
                    break;
                }
            }
        }
        let kernel = if track { u[r..].to_vec() } else { Vec::new() };
        a.truncate(r);
        let transform = track.then(|| {
            u.truncate(r);
            u
        });
        Echelon { ncols, rows: a, pivots, transform, kernel }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.binary_search(&col).is_ok()
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Replaces `v` by the canonical representative of `v + L`.
    pub fn reduce(&self, v: &mut [Int]) {
        self.reduce_with_quotients(v);
    }

    fn reduce_with_quotients(&self, v: &mut [Int]) -> Vec<Int> {
        debug_assert_eq!(v.len(), self.ncols);
        let mut quotients = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = v[p].div_euclid(row[p]);
            if q != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
            quotients.push(q);
        }
        quotients
    }

    /// Integer coefficients `c` with `sum_j c[j] * generators[j] == v`, if any.
    ///
    /// Panics if the echelon was built without a transform.
    pub fn solve(&self, v: &[Int]) -> Option<Vec<Int>> {
        let transform = self.transform.as_ref().expect("echelon built without transform");
        let mut w = v.to_vec();
        let quotients = self.reduce_with_quotients(&mut w);
        if w.iter().any(|&x| x != 0) {
            return None;
        }
        let ngens = transform.first().map_or(self.kernel.first().map_or(0, Vec::len), Vec::len);
        let mut out = vec![0; ngens];
        for (q, t) in quotients.iter().zip(transform) {
            if *q != 0 {
                for (o, &x) in out.iter_mut().zip(t) {
                    *o += q * x;
                }
            }
        }
        Some(out)
    }

    /// Generators of the module of integer relations among the inputs.
    pub fn kernel(&self) -> &[Vec<Int>] {
        &self.kernel
    }
}

pub fn gcd(a: Int, b: Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn axpy(a: &mut [Vec<Int>], dst: usize, src: usize, q: Int) {
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, &y) in d.iter_mut().zip(s.iter()) {
        *x += q * y;
    }
}

fn negate(row: &mut [Int]) {
    for x in row {
        *x = -*x;
    }
}

/// Nonzero invariant factors of the integer matrix whose rows are `rows`,
/// in divisibility order.
pub fn smith_invariants(rows: &[Vec<Int>]) -> Vec<Int> {
    let m = rows.len();
    if m == 0 {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut a = rows.to_vec();
    let mut out = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_entry(&a, t, t) else { break };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t] != 0 {
                    let q = a[i][t] / a[t][t];
                    axpy(&mut a, i, t, -q);
                    clean &= a[i][t] == 0;
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 {
                    let q = a[t][j] / a[t][t];
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    clean &= a[t][j] == 0;
                }
            }
            if clean {
                let d = a[t][t];
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % d != 0));
                match bad {
                    Some(i) => axpy(&mut a, t, i, 1),
                    None => break,
                }
            }
            // Bring the smallest entry of row/column t to the corner.
            let mut best = (t, t);
            for i in t + 1..m {
                if a[i][t] != 0 && a[i][t].unsigned_abs() < a[best.0][best.1].unsigned_abs() {
                    best = (i, t);
                }
            }
            for j in t + 1..n {
                if a[t][j] != 0 && a[t][j].unsigned_abs() < a[best.0][best.1].unsigned_abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            swap_cols(&mut a, t, best.1);
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out
}

fn min_entry(a: &[Vec<Int>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, &x) in row.iter().enumerate().skip(c0) {
            if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < a[bi][bj].unsigned_abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<Int>], i: usize, j: usize) {
    if i != j {
        for row in a {
            row.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_of_dependent_rows() {
        let e = Echelon::new(vec![vec![2, 4, 6], vec![1, 2, 3], vec![0, 0, 5]], 3);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots(), &[0, 2]);
        assert_eq!(e.free_columns(), vec![1]);
    }

    #[test]
    fn reduction_is_canonical_modulo_lattice() {
        let e = Echelon::new(vec![vec![3, 1], vec![0, 2]], 2);
        let mut a = vec![7, 5];
        let mut b = vec![7 + 3 * 4, 5 + 4 + 2 * 9];
        e.reduce(&mut a);
        e.reduce(&mut b);
        assert_eq!(a, b);
        assert!(a[0] >= 0 && a[0] < 3);
    }

    #[test]
    fn solve_recovers_combination() {
        let gens = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 2, 1]];
        let e = Echelon::with_transform(gens.clone(), 3);
        let target = vec![2, 5, 3];
        let c = e.solve(&target).unwrap();
        let mut acc = vec![0; 3];
        for (ci, g) in c.iter().zip(&gens) {
            for (a, x) in acc.iter_mut().zip(g) {
                *a += ci * x;
            }
        }
        assert_eq!(acc, target);
        assert!(e.solve(&[1, 0, 0]).is_none());
        assert_eq!(e.kernel().len(), 1);
    }

    #[test]
    fn smith_detects_torsion() {
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_invariants(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert!(smith_invariants(&[]).is_empty());
    }
}
