//! Dense exact linear algebra over [`Field`]s.
//!
//! Subspaces are kept as reduced row-echelon bases; the pivot columns give
//! coordinates of any member directly.

use crate::scalar::Field;

/// Reduces `rows` to RREF in place semantics and returns (nonzero rows, pivot columns).
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>) -> (Vec<Vec<F>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = F::one().fdiv(&rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = v.fmul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = f.fmul(&rows[r][j]);
                    rows[i][j] = rows[i][j].fsub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    rref(rows.to_vec()).1.len()
}

pub fn det<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            d = d.fneg();
        }
        d = d.fmul(&a[c][c]);
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c].fdiv(&a[c][c]);
                for j in c..n {
                    let t = f.fmul(&a[c][j]);
                    a[i][j] = a[i][j].fsub(&t);
                }
            }
        }
    }
    d
}

/// Basis of `{x : rows · x = 0}` in canonical (RREF) form.
pub fn null_space<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let (r, piv) = rref(rows.to_vec());
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &pc) in r.iter().zip(&piv) {
            v[pc] = row[free].fneg();
        }
        basis.push(v);
    }
    rref(basis).0
}

/// Solves `a · x = b`, returning one solution if consistent.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], ncols: usize) -> Option<Vec<F>> {
    let aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![F::zero(); ncols]);
    }
    let (r, piv) = rref(aug);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![F::zero(); ncols];
    for (row, &pc) in r.iter().zip(&piv) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// A linear subspace held as an RREF basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    pub ambient: usize,
    pub basis: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn span(ambient: usize, vectors: &[Vec<F>]) -> Self {
        let (basis, pivots) = if vectors.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            rref(vectors.to_vec())
        };
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace::span(ambient, &[])
    }

    pub fn full(ambient: usize) -> Self {
        let id: Vec<Vec<F>> = (0..ambient)
            .map(|i| {
                let mut v = vec![F::zero(); ambient];
                v[i] = F::one();
                v
            })
            .collect();
        Subspace::span(ambient, &id)
    }

    /// Kernel of a system of linear functionals.
    pub fn kernel(ambient: usize, functionals: &[Vec<F>]) -> Self {
        if functionals.is_empty() {
            return Subspace::full(ambient);
        }
        let basis = null_space(functionals, ambient);
        Subspace::span(ambient, &basis)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a member with respect to the RREF basis.
    pub fn coords(&self, v: &[F]) -> Vec<F> {
        self.pivots.iter().map(|&p| v[p].clone()).collect()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let c = self.coords(v);
        let mut w = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            for (wj, bj) in w.iter_mut().zip(b) {
                *wj = wj.fsub(&ci.fmul(bj));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains_space(&self, other: &Subspace<F>) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace<F>) -> Self {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &v)
    }

    /// Functionals cutting out this subspace (an RREF basis of the annihilator
    /// under the standard dot product).
    pub fn annihilator(&self) -> Vec<Vec<F>> {
        if self.basis.is_empty() {
            return Subspace::<F>::full(self.ambient).basis;
        }
        null_space(&self.basis, self.ambient)
    }

    pub fn intersect(&self, other: &Subspace<F>) -> Self {
        let mut f = self.annihilator();
        f.extend(other.annihilator());
        Subspace::kernel(self.ambient, &f)
    }

    /// Extends the basis `start` (assumed independent, inside `self`) to a
    /// basis of `self` using vectors of the canonical basis.
    pub fn complete_basis(&self, start: &[Vec<F>]) -> Vec<Vec<F>> {
        let mut out = start.to_vec();
        for b in &self.basis {
            let mut trial = out.clone();
            trial.push(b.clone());
            if rank(&trial) == trial.len() {
                out = trial;
            }
        }
        out
    }
}

/// Inverse of a square matrix, if invertible.
pub fn inverse<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let aug: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let (r, piv) = rref(aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc.fadd(&x.fmul(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn null_space_and_det() {
        let ns = null_space(&[v(&[1, 1, 0])], 3);
        assert_eq!(ns.len(), 2);
        for b in &ns {
            assert_eq!(dot(&v(&[1, 1, 0]), b), rat(0));
        }
        assert_eq!(det(&[v(&[2, 1]), v(&[1, 3])]), rat(5));
        assert_eq!(det(&[v(&[0, 1]), v(&[1, 0])]), rat(-1));
    }

    #[test]
    fn subspace_ops() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[0, 5, 0])));
        assert_eq!(a.sum(&b).dim(), 3);
        assert!(!a.contains(&v(&[0, 0, 1])));
        assert_eq!(solve(&[v(&[1, 1])], &[rat(2)], 2).unwrap().len(), 2);
        assert!(solve(&[v(&[1, 1]), v(&[1, 1])], &[rat(2), rat(3)], 2).is_none());
        let inv = inverse(&[v(&[2, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(inv, vec![v(&[1, -1]), v(&[-1, 2])]);
        assert!(inverse(&[v(&[1, 1]), v(&[2, 2])]).is_none());
    }
}
