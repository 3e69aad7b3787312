//! Lie algebra data: structure constants, ideals, quotients, and the
//! coadjoint action used to build Lie derivatives on `S g*` and `Lambda g*`.
//!
//! Convention: `C[i][j][k]` is the coefficient of `e_i` in `[e_j, e_k]`.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::KernelError;
use crate::scalar::{rat_int, render_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebraData {
    pub dim: usize,
    pub basis_names: Vec<String>,
    /// `c[i][j][k]` = C^i_{jk}
    pub c: Vec<Vec<Vec<Rational>>>,
}

/// First violated identity, with the offending index tuple (1-based in
/// rendering) and the exact residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieViolation {
    Antisymmetry {
        i: usize,
        j: usize,
        k: usize,
        residual: Rational,
    },
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        residual: Rational,
    },
    Ideal {
        a: usize,
        j: usize,
        i: usize,
        value: Rational,
    },
}

impl std::fmt::Display for LieViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LieViolation::Antisymmetry { i, j, k, residual } => write!(
                f,
                "antisymmetry fails at (i,j,k)=({},{},{}): C^i_jk + C^i_kj = {}",
                i + 1,
                j + 1,
                k + 1,
                render_rational(residual)
            ),
            LieViolation::Jacobi { i, j, k, l, residual } => write!(
                f,
                "Jacobi identity fails at (i,j,k,l)=({},{},{},{}): residual {}",
                i + 1,
                j + 1,
                k + 1,
                l + 1,
                render_rational(residual)
            ),
            LieViolation::Ideal { a, j, i, value } => write!(
                f,
                "ideal condition fails: C^{}_{{{},{}}} = {} with {} outside the ideal",
                a + 1,
                j + 1,
                i + 1,
                render_rational(value),
                a + 1
            ),
        }
    }
}

impl LieAlgebraData {
    pub fn new(
        basis_names: Vec<String>,
        c: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Arc<Self>, KernelError> {
        let dim = basis_names.len();
        if c.len() != dim || c.iter().any(|p| p.len() != dim || p.iter().any(|q| q.len() != dim)) {
            return Err(KernelError::LieData(format!(
                "structure constants must form a {dim}x{dim}x{dim} array"
            )));
        }
        Ok(Arc::new(Self {
            dim,
            basis_names,
            c,
        }))
    }

    /// Build from sparse triples `(i, j, k, value)` with `j < k`; the `j > k`
    /// entries are filled in by antisymmetry.
    pub fn from_sparse(
        basis_names: Vec<String>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Arc<Self>, KernelError> {
        let dim = basis_names.len();
        let mut c = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        for &(i, j, k, ref v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(KernelError::LieIndex(i.max(j).max(k), dim));
            }
            if j >= k {
                return Err(KernelError::LieData(format!(
                    "sparse entries require j < k, got ({}, {}, {})",
                    i + 1,
                    j + 1,
                    k + 1
                )));
            }
            c[i][j][k] = v.clone();
            c[i][k][j] = -v.clone();
        }
        Self::new(basis_names, c)
    }

    pub fn abelian(dim: usize) -> Arc<Self> {
        let names = (1..=dim).map(|i| format!("e{i}")).collect();
        Self::from_sparse(names, &[]).expect("abelian data")
    }

    /// `su(2)` with `C^i_{jk} = epsilon_{ijk}`.
    pub fn su2() -> Arc<Self> {
        let names = vec!["e1".into(), "e2".into(), "e3".into()];
        Self::from_sparse(
            names,
            &[
                (2, 0, 1, rat_int(1)),
                (0, 1, 2, rat_int(1)),
                (1, 0, 2, rat_int(-1)),
            ],
        )
        .expect("su2 data")
    }

    /// Heisenberg algebra: `[e1, e2] = e3`.
    pub fn heisenberg() -> Arc<Self> {
        let names = vec!["e1".into(), "e2".into(), "e3".into()];
        Self::from_sparse(names, &[(2, 0, 1, rat_int(1))]).expect("heisenberg data")
    }

    /// Coefficient of `e_i` in `[e_j, e_k]`.
    pub fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.c[i][j][k]
    }

    /// `ok` iff antisymmetry and the Jacobi identity hold exactly; otherwise
    /// the first violated index tuple with its residual.
    pub fn validate(&self) -> Result<(), LieViolation> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let residual = &self.c[i][j][k] + &self.c[i][k][j];
                    if !residual.is_zero() {
                        return Err(LieViolation::Antisymmetry { i, j, k, residual });
                    }
                }
            }
        }
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    for l in 0..self.dim {
                        let mut residual = Rational::zero();
                        for m in 0..self.dim {
                            residual += &self.c[m][j][k] * &self.c[i][m][l]
                                + &self.c[m][k][l] * &self.c[i][m][j]
                                + &self.c[m][l][j] * &self.c[i][m][k];
                        }
                        if !residual.is_zero() {
                            return Err(LieViolation::Jacobi { i, j, k, l, residual });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Matrices of the coadjoint action: `coadjoint()[k][j][l]` is the
    /// coefficient of `theta^l` in `L_k theta^j = -C^j_{kl} theta^l`.
    pub fn coadjoint(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.dim)
            .map(|k| {
                (0..self.dim)
                    .map(|j| (0..self.dim).map(|l| -self.c[j][k][l].clone()).collect())
                    .collect()
            })
            .collect()
    }
}

/// An ideal given as a subset of basis indices; the complement indices are
/// the `f_a` directions of the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    indices: Vec<usize>,
}

impl IdealSpec {
    pub fn new(lie: &LieAlgebraData, mut indices: Vec<usize>) -> Result<Self, KernelError> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= lie.dim) {
            return Err(KernelError::LieIndex(bad, lie.dim));
        }
        Ok(Self { indices })
    }

    pub fn ideal_indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn complement(&self, lie: &LieAlgebraData) -> Vec<usize> {
        (0..lie.dim).filter(|i| !self.indices.contains(i)).collect()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.contains(&idx)
    }

    /// `ok` iff `[g, n]` lands in `n`: `C^a_{ji} = 0` for every `i` in the
    /// ideal and `a` outside it.
    pub fn validate(&self, lie: &LieAlgebraData) -> Result<(), LieViolation> {
        for j in 0..lie.dim {
            for &i in &self.indices {
                for a in self.complement(lie) {
                    let v = &lie.c[a][j][i];
                    if !v.is_zero() {
                        return Err(LieViolation::Ideal {
                            a,
                            j,
                            i,
                            value: v.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Structure constants of `q = g/n` in the basis induced by the complement
/// indices, in ascending order.
pub fn quotient_constants(
    lie: &Arc<LieAlgebraData>,
    ideal: &IdealSpec,
) -> Result<Arc<LieAlgebraData>, KernelError> {
    ideal
        .validate(lie)
        .map_err(|v| KernelError::LieData(v.to_string()))?;
    let comp = ideal.complement(lie);
    let names = comp
        .iter()
        .map(|&a| format!("{}_q", lie.basis_names[a]))
        .collect();
    let m = comp.len();
    let mut c = vec![vec![vec![Rational::zero(); m]; m]; m];
    for (ci, &i) in comp.iter().enumerate() {
        for (cj, &j) in comp.iter().enumerate() {
            for (ck, &k) in comp.iter().enumerate() {
                c[ci][cj][ck] = lie.c[i][j][k].clone();
            }
        }
    }
    LieAlgebraData::new(names, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;

    #[test]
    fn su2_validates() {
        assert_eq!(LieAlgebraData::su2().validate(), Ok(()));
        assert_eq!(LieAlgebraData::abelian(4).validate(), Ok(()));
        assert_eq!(LieAlgebraData::heisenberg().validate(), Ok(()));
    }

    #[test]
    fn antisymmetry_violation_witness() {
        // C^1_{23} = 1 with no matching C^1_{32}
        let mut c = vec![vec![vec![Rational::zero(); 3]; 3]; 3];
        c[0][1][2] = rat_int(1);
        let lie =
            LieAlgebraData::new(vec!["e1".into(), "e2".into(), "e3".into()], c).unwrap();
        match lie.validate() {
            Err(LieViolation::Antisymmetry { i, j, k, .. }) => {
                assert_eq!((i, j, k), (0, 1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jacobi_violation_detected() {
        // [e1,e2]=e1, [e1,e3]=e2, [e2,e3]=0 breaks Jacobi
        let lie = LieAlgebraData::from_sparse(
            vec!["e1".into(), "e2".into(), "e3".into()],
            &[(0, 0, 1, rat_int(1)), (1, 0, 2, rat_int(1))],
        )
        .unwrap();
        assert!(matches!(lie.validate(), Err(LieViolation::Jacobi { .. })));
    }

    #[test]
    fn ideals_and_quotients() {
        let t2 = LieAlgebraData::abelian(2);
        let n = IdealSpec::new(&t2, vec![0]).unwrap();
        assert_eq!(n.validate(&t2), Ok(()));
        let q = quotient_constants(&t2, &n).unwrap();
        assert_eq!(q.dim, 1);
        assert_eq!(q.validate(), Ok(()));

        let su2 = LieAlgebraData::su2();
        let bad = IdealSpec::new(&su2, vec![0]).unwrap();
        // C^2_{31} = epsilon_{231} = 1 escapes the span of e1
        match bad.validate(&su2) {
            Err(LieViolation::Ideal { a, j, i, .. }) => {
                assert!(! [0usize].contains(&a));
                assert_eq!(i, 0);
                assert!(j == 1 || j == 2);
            }
            other => panic!("unexpected {other:?}"),
        }

        let heis = LieAlgebraData::heisenberg();
        let center = IdealSpec::new(&heis, vec![2]).unwrap();
        assert_eq!(center.validate(&heis), Ok(()));
        let q = quotient_constants(&heis, &center).unwrap();
        assert_eq!(q.dim, 2);
        assert!(q.c.iter().flatten().flatten().all(|x| x.is_zero()));

        let any = IdealSpec::new(&t2, vec![1]).unwrap();
        let q = quotient_constants(&t2, &any).unwrap();
        assert!(q.c.iter().flatten().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn coadjoint_su2_values() {
        let su2 = LieAlgebraData::su2();
        let ad = su2.coadjoint();
        // L_1 theta^2 = -C^2_{1l} theta^l = -eps_{213} theta^3 = +theta^3
        assert_eq!(ad[0][1][2], rat_int(1));
        assert_eq!(ad[0][1][0], rat_int(0));
        // each coadjoint matrix of su(2) is antisymmetric
        for k in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    assert_eq!(ad[k][j][l], -ad[k][l][j].clone());
                }
            }
        }
        // abelian: all zero
        let ab = LieAlgebraData::abelian(3);
        assert!(ab.coadjoint().iter().flatten().flatten().all(|x| x.is_zero()));
    }

    /// Oracle for the coadjoint convention: `(L_k theta^j)(e_l) = -theta^j([e_k, e_l])`.
    #[test]
    fn coadjoint_matches_pairing_oracle() {
        let su2 = LieAlgebraData::su2();
        let ad = su2.coadjoint();
        for k in 0..3 {
            for j in 0..3 {
                for l in 0..3 {
                    let expected = -su2.bracket_coeff(j, k, l).clone();
                    assert_eq!(ad[k][j][l], expected);
                }
            }
        }
    }

    /// Dual Lie-algebra relation `[L_j, L_k] = L_{[e_j, e_k]}` on the
    /// coadjoint matrices, exhaustively over index pairs.
    #[test]
    fn coadjoint_is_a_representation() {
        for lie in [
            LieAlgebraData::su2(),
            LieAlgebraData::heisenberg(),
            LieAlgebraData::abelian(3),
        ] {
            let n = lie.dim;
            let ad = lie.coadjoint();
            let mat_mul = |a: &Vec<Vec<Rational>>, b: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
                // entry [j][l] of the composite theta^j -> a(b(theta^j))
                (0..n)
                    .map(|j| {
                        (0..n)
                            .map(|l| {
                                (0..n).map(|m| &b[j][m] * &a[m][l]).sum::<Rational>()
                            })
                            .collect()
                    })
                    .collect()
            };
            for j in 0..n {
                for k in 0..n {
                    let jk = mat_mul(&ad[j], &ad[k]);
                    let kj = mat_mul(&ad[k], &ad[j]);
                    for p in 0..n {
                        for q in 0..n {
                            let commutator = &jk[p][q] - &kj[p][q];
                            let expected: Rational = (0..n)
                                .map(|m| lie.bracket_coeff(m, j, k) * &ad[m][p][q])
                                .sum();
                            assert_eq!(commutator, expected, "j={j} k={k} p={p} q={q}");
                        }
                    }
                }
            }
        }
    }
}
