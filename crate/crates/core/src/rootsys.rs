//! Exact root-system engine for type-A simple Lie algebras.
//!
//! Everything here is computed in exact rational arithmetic from structure
//! data: roots in simple-root coordinates, Killing-form duals `H_alpha`
//! normalized by the trace form of the adjoint representation, flag and
//! Hermitian-symmetric decompositions, T-root module partitions, gamma
//! strings, and Koszul-type elements. The interface is series-agnostic but
//! only type A is constructed; type A already realizes every class-C factor
//! and all the rank <= 4 flag test cases.

use std::collections::HashMap;

use crate::exact::{rat, rat_int, solve_in_span, Rat};
use num::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("not a root of this system: {0:?}")]
    NotARoot(Vec<i64>),
    #[error("node index {node} out of range 1..={rank}")]
    NodeOutOfRange { node: usize, rank: usize },
    #[error("painted set must be a nonempty subset of 1..={rank}")]
    BadPaintedSet { rank: usize },
    #[error("gamma string is undefined for gamma = ±beta")]
    ParallelRoots,
    #[error("module index {index} out of range 1..={count}")]
    ModuleIndexOutOfRange { index: usize, count: usize },
}

/// A root in simple-root coordinates (integer coefficients).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(Vec<i64>);

impl Root {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().sum::<i64>() > 0
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }

    fn height(&self) -> i64 {
        self.0.iter().sum()
    }
}

/// Exact value of a Killing pairing: `value` when `imaginary` is false,
/// `sqrt(-1) * value` when it is true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValue {
    pub value: Rat,
    pub imaginary: bool,
}

impl ExactValue {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Unwraps a value known to be real; panics on an imaginary one.
    pub fn expect_real(&self) -> &Rat {
        assert!(
            !self.imaginary || self.value.is_zero(),
            "expected a real pairing, got an imaginary one"
        );
        &self.value
    }
}

/// An element of the Cartan subalgebra in the dual basis `{H_alpha_i}`.
///
/// `imaginary = false` stores `sum coords_i * H_alpha_i` (an element of
/// `sqrt(-1) * t_compact`); `imaginary = true` stores `sqrt(-1)` times that,
/// i.e. an element of the compact Cartan itself. Every quantity the geometry
/// needs lives in one of the two, so a flag keeps all coordinates rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanVector {
    coords: Vec<Rat>,
    imaginary: bool,
}

impl CartanVector {
    pub fn new(coords: Vec<Rat>, imaginary: bool) -> Self {
        CartanVector { coords, imaginary }
    }

    pub fn zero(rank: usize) -> Self {
        CartanVector {
            coords: vec![Rat::zero(); rank],
            imaginary: false,
        }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn imaginary(&self) -> bool {
        self.imaginary
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn scale(&self, s: &Rat) -> CartanVector {
        CartanVector {
            coords: self.coords.iter().map(|c| c * s).collect(),
            imaginary: self.imaginary,
        }
    }

    /// Multiplication by `sqrt(-1)`: flips the flag, negating when the value
    /// was already imaginary (`i * i = -1`).
    pub fn times_i(&self) -> CartanVector {
        if self.imaginary {
            CartanVector {
                coords: self.coords.iter().map(|c| -c).collect(),
                imaginary: false,
            }
        } else {
            CartanVector {
                coords: self.coords.clone(),
                imaginary: true,
            }
        }
    }

    pub fn add(&self, other: &CartanVector) -> CartanVector {
        assert_eq!(self.coords.len(), other.coords.len(), "rank mismatch");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(
            self.imaginary, other.imaginary,
            "cannot add a real and an imaginary Cartan vector"
        );
        CartanVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            imaginary: self.imaginary,
        }
    }

    pub fn sub(&self, other: &CartanVector) -> CartanVector {
        self.add(&other.scale(&rat(-1, 1)))
    }
}

/// A type-A root system with exact Killing data.
#[derive(Debug, Clone)]
pub struct RootSystem {
    rank: usize,
    roots: Vec<Root>,
    positive: Vec<Root>,
    index: HashMap<Root, usize>,
    cartan: Vec<Vec<i64>>,
    gram: Vec<Vec<Rat>>,
}

impl RootSystem {
    /// Full root system of `A_rank`, with the Killing form normalized as the
    /// trace form of the adjoint representation. For `su(n)`, `n = rank + 1`,
    /// this is `B(X, Y) = 2n tr(XY)`, so `(alpha_i, alpha_j)` is the Cartan
    /// matrix over `2n`.
    pub fn type_a(rank: usize) -> Result<RootSystem, RootSystemError> {
        if rank == 0 {
            return Err(RootSystemError::ZeroRank);
        }
        let n = rank + 1;
        let mut positive = Vec::new();
        for i in 0..rank {
            for j in i..rank {
                let mut coeffs = vec![0i64; rank];
                for c in coeffs.iter_mut().take(j + 1).skip(i) {
                    *c = 1;
                }
                positive.push(Root(coeffs));
            }
        }
        positive.sort_by_key(|r| (r.height(), r.0.clone()));
        let mut roots = positive.clone();
        roots.extend(positive.iter().map(Root::neg));
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        let mut cartan = vec![vec![0i64; rank]; rank];
        for (i, row) in cartan.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                };
            }
        }
        let gram = cartan
            .iter()
            .map(|row| row.iter().map(|&a| rat(a, 2 * n as i64)).collect())
            .collect();
        Ok(RootSystem {
            rank,
            roots,
            positive,
            index,
            cartan,
            gram,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Gram matrix `(alpha_i, alpha_j) = B(H_{alpha_i}, H_{alpha_j})` of the
    /// Killing form on the real span of the root duals.
    pub fn killing_gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    /// Simple root `alpha_i`, `i` 1-based.
    pub fn simple_root(&self, i: usize) -> Result<Root, RootSystemError> {
        if i == 0 || i > self.rank {
            return Err(RootSystemError::NodeOutOfRange {
                node: i,
                rank: self.rank,
            });
        }
        let mut coeffs = vec![0i64; self.rank];
        coeffs[i - 1] = 1;
        Ok(Root(coeffs))
    }

    pub fn root_from_coeffs(&self, coeffs: Vec<i64>) -> Result<Root, RootSystemError> {
        let r = Root(coeffs);
        if self.is_root(&r) {
            Ok(r)
        } else {
            Err(RootSystemError::NotARoot(r.0))
        }
    }

    /// Killing-dual `H_alpha`, i.e. the unique Cartan element with
    /// `B(H_alpha, X) = alpha(X)`. In the `{H_alpha_i}` basis its coordinates
    /// are exactly the simple-root coefficients of `alpha`.
    pub fn dual_element(&self, alpha: &Root) -> Result<CartanVector, RootSystemError> {
        if !self.is_root(alpha) {
            return Err(RootSystemError::NotARoot(alpha.0.clone()));
        }
        Ok(CartanVector::new(
            alpha.coeffs().iter().map(|&c| rat_int(c)).collect(),
            false,
        ))
    }

    /// Killing pairing of two Cartan vectors, with the reality bookkeeping of
    /// the imaginary flags.
    pub fn killing(&self, v: &CartanVector, w: &CartanVector) -> ExactValue {
        assert_eq!(v.coords.len(), self.rank, "rank mismatch");
        assert_eq!(w.coords.len(), self.rank, "rank mismatch");
        let mut raw = Rat::zero();
        for i in 0..self.rank {
            if v.coords[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if self.gram[i][j].is_zero() || w.coords[j].is_zero() {
                    continue;
                }
                raw += &v.coords[i] * &self.gram[i][j] * &w.coords[j];
            }
        }
        match (v.imaginary, w.imaginary) {
            (false, false) => ExactValue {
                value: raw,
                imaginary: false,
            },
            (true, true) => ExactValue {
                value: -raw,
                imaginary: false,
            },
            _ => ExactValue {
                value: raw,
                imaginary: true,
            },
        }
    }

    /// `alpha(v)` for a root `alpha` and a Cartan vector `v`; equals
    /// `B(H_alpha, v)`.
    pub fn root_pairing(&self, alpha: &Root, v: &CartanVector) -> ExactValue {
        let dual = CartanVector::new(
            alpha.coeffs().iter().map(|&c| rat_int(c)).collect(),
            false,
        );
        self.killing(&dual, v)
    }

    /// Maximal `gamma`-string through `beta`: the pair `(p, q)` with
    /// `p <= 0 <= q` such that `beta + k gamma` is a root exactly for
    /// `p <= k <= q`.
    pub fn gamma_string(&self, beta: &Root, gamma: &Root) -> Result<(i64, i64), RootSystemError> {
        if !self.is_root(beta) {
            return Err(RootSystemError::NotARoot(beta.0.clone()));
        }
        if !self.is_root(gamma) {
            return Err(RootSystemError::NotARoot(gamma.0.clone()));
        }
        if beta == gamma || *beta == gamma.neg() {
            return Err(RootSystemError::ParallelRoots);
        }
        let shift = |k: i64| -> Root {
            Root(
                beta.coeffs()
                    .iter()
                    .zip(gamma.coeffs())
                    .map(|(b, g)| b + k * g)
                    .collect(),
            )
        };
        let mut q = 0i64;
        while self.is_root(&shift(q + 1)) {
            q += 1;
        }
        let mut p = 0i64;
        while self.is_root(&shift(p - 1)) {
            p -= 1;
        }
        Ok((p, q))
    }

    /// T-root decomposition of the complement for a painted set of simple
    /// roots (1-based indices). Two positive complementary roots fall in the
    /// same irreducible module exactly when their painted coordinates agree.
    pub fn flag(&self, painted: &[usize]) -> Result<FlagDecomposition, RootSystemError> {
        let mut painted: Vec<usize> = painted.to_vec();
        painted.sort_unstable();
        painted.dedup();
        if painted.is_empty() || painted.iter().any(|&p| p == 0 || p > self.rank) {
            return Err(RootSystemError::BadPaintedSet { rank: self.rank });
        }
        let signature = |r: &Root| -> Vec<i64> {
            painted.iter().map(|&p| r.coeffs()[p - 1]).collect()
        };
        let mut r_h = Vec::new();
        let mut r_n_pos = Vec::new();
        for r in &self.roots {
            let sig = signature(r);
            if sig.iter().all(|&c| c == 0) {
                r_h.push(r.clone());
            } else if r.is_positive() {
                r_n_pos.push(r.clone());
            }
        }
        // Group by painted signature; painted simple roots seed the first
        // t modules in painted order, the remaining classes follow in
        // lexicographic signature order.
        let mut classes: HashMap<Vec<i64>, Vec<Root>> = HashMap::new();
        for r in &r_n_pos {
            classes.entry(signature(r)).or_default().push(r.clone());
        }
        let t = painted.len();
        let mut modules: Vec<Vec<Root>> = Vec::new();
        for (slot, _) in painted.iter().enumerate() {
            let mut sig = vec![0i64; t];
            sig[slot] = 1;
            let class = classes.remove(&sig).expect("painted simple class exists");
            modules.push(class);
        }
        let mut rest: Vec<(Vec<i64>, Vec<Root>)> = classes.into_iter().collect();
        rest.sort_by(|a, b| a.0.cmp(&b.0));
        modules.extend(rest.into_iter().map(|(_, c)| c));
        for m in modules.iter_mut() {
            m.sort();
        }
        let mut flag = FlagDecomposition {
            painted,
            r_h,
            r_n_pos,
            center_dim: t,
            modules,
            n_matrix: Vec::new(),
        };
        flag.n_matrix = self.module_coefficients(&flag);
        Ok(flag)
    }

    /// Coefficients of the non-simple module classes over the painted-simple
    /// classes: row `i - t - 1` holds `n_{ij}` with
    /// `zeta_i = sum_j n_{ij} zeta_j`. Exact rationals; integral for full
    /// flags but genuinely fractional in general.
    fn module_coefficients(&self, flag: &FlagDecomposition) -> Vec<Vec<Rat>> {
        let t = flag.center_dim;
        let s = flag.modules.len();
        let cols: Vec<Vec<Rat>> = (0..t)
            .map(|j| self.zeta_of(&flag.modules[j]).coords().to_vec())
            .collect();
        (t..s)
            .map(|i| {
                let rhs = self.zeta_of(&flag.modules[i]);
                solve_in_span(&cols, rhs.coords())
                    .expect("zeta_i lies in the span of the painted-simple zetas")
            })
            .collect()
    }

    fn zeta_of(&self, module: &[Root]) -> CartanVector {
        let mut acc = CartanVector::zero(self.rank);
        for r in module {
            acc = acc.add(&self.dual_element(r).expect("module roots are roots"));
        }
        acc
    }

    /// `zeta_j = sum_{alpha in R_j} H_alpha` for a module index `j`
    /// (1-based, `1 <= j <= s`).
    pub fn zeta(
        &self,
        flag: &FlagDecomposition,
        j: usize,
    ) -> Result<CartanVector, RootSystemError> {
        if j == 0 || j > flag.modules.len() {
            return Err(RootSystemError::ModuleIndexOutOfRange {
                index: j,
                count: flag.modules.len(),
            });
        }
        Ok(self.zeta_of(&flag.modules[j - 1]))
    }

    /// Koszul element `delta_kappa = 1/2 sum_{alpha in R_n^+} H_alpha`.
    pub fn koszul_delta(&self, flag: &FlagDecomposition) -> CartanVector {
        let mut acc = CartanVector::zero(self.rank);
        for r in &flag.r_n_pos {
            acc = acc.add(&self.dual_element(r).expect("complement roots are roots"));
        }
        acc.scale(&rat(1, 2))
    }

    /// Data of the irreducible Hermitian symmetric pair obtained by painting
    /// a single node: `Z` is normalized so that `alpha(Z) = sqrt(-1)` on the
    /// complement, and `B(Z, Z) = -2 n_dim`.
    pub fn hermitian_symmetric_pair(
        rank: usize,
        node: usize,
    ) -> Result<HermitianSymmetricPair, RootSystemError> {
        let rs = RootSystem::type_a(rank)?;
        if node == 0 || node > rank {
            return Err(RootSystemError::NodeOutOfRange { node, rank });
        }
        let flag = rs.flag(&[node])?;
        // Abelian complement: no two complementary positive roots may sum to
        // a root. Automatic in type A (painted coefficient would reach 2).
        for a in &flag.r_n_pos {
            for b in &flag.r_n_pos {
                let sum = Root(
                    a.coeffs()
                        .iter()
                        .zip(b.coeffs())
                        .map(|(x, y)| x + y)
                        .collect(),
                );
                debug_assert!(!rs.is_root(&sum), "complement is abelian");
            }
        }
        let n_dim = flag.r_n_pos.len();
        let mut w = CartanVector::zero(rank);
        for r in &flag.r_n_pos {
            w = w.add(&rs.dual_element(r)?);
        }
        // alpha(sum H) = 1/2 on the complement, so Z = i * 2 * sum H.
        let z_element = w.scale(&rat(2, 1)).times_i();
        Ok(HermitianSymmetricPair {
            root_system: rs,
            flag,
            z_element,
            n_dim,
        })
    }
}

/// Flag decomposition data: painted simple roots, isotropy roots, positive
/// complement, and its partition into T-root modules.
#[derive(Debug, Clone)]
pub struct FlagDecomposition {
    /// Painted simple-root indices, 1-based, sorted.
    pub painted: Vec<usize>,
    /// Roots of the isotropy algebra `h` (both signs).
    pub r_h: Vec<Root>,
    /// Positive complementary roots.
    pub r_n_pos: Vec<Root>,
    /// `t = dim z`, the number of painted simple roots.
    pub center_dim: usize,
    /// Irreducible modules `R_j`; the first `center_dim` contain the painted
    /// simple roots in painted order.
    pub modules: Vec<Vec<Root>>,
    /// `n_{ij}` rows for the non-simple classes `i > t` over `j = 1..=t`.
    pub n_matrix: Vec<Vec<Rat>>,
}

impl FlagDecomposition {
    pub fn module_count(&self) -> usize {
        self.modules.len()
    }

    /// Index (1-based) of the module containing `r`, if any.
    pub fn module_of(&self, r: &Root) -> Option<usize> {
        self.modules
            .iter()
            .position(|m| m.contains(r))
            .map(|i| i + 1)
    }
}

/// An irreducible compact Hermitian symmetric space `G/T^1 . H` realized by
/// painting one node of a type-A diagram.
#[derive(Debug, Clone)]
pub struct HermitianSymmetricPair {
    pub root_system: RootSystem,
    pub flag: FlagDecomposition,
    /// `Z` with `ad(Z)` the complex structure on the complement.
    pub z_element: CartanVector,
    pub n_dim: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    fn all_painted_subsets(rank: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << rank) {
            out.push((0..rank).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect());
        }
        out
    }

    #[test]
    fn type_a_counts_and_cartan() {
        let rs = RootSystem::type_a(3).unwrap();
        assert_eq!(rs.roots().len(), 12);
        assert_eq!(rs.positive_roots().len(), 6);
        let rs1 = RootSystem::type_a(1).unwrap();
        assert_eq!(rs1.roots().len(), 2);
        assert_eq!(rs1.cartan_matrix(), &[vec![2]]);
        let rs2 = RootSystem::type_a(2).unwrap();
        let pos: Vec<Vec<i64>> = rs2
            .positive_roots()
            .iter()
            .map(|r| r.coeffs().to_vec())
            .collect();
        assert!(pos.contains(&vec![1, 0]));
        assert!(pos.contains(&vec![0, 1]));
        assert!(pos.contains(&vec![1, 1]));
        assert_eq!(pos.len(), 3);
        assert_eq!(RootSystem::type_a(0).unwrap_err(), RootSystemError::ZeroRank);
    }

    #[test]
    fn dual_pairing_is_killing_dual() {
        // B(H_alpha, X) = alpha(X) for every root alpha and Cartan X, exactly.
        for rank in 1..=4 {
            let rs = RootSystem::type_a(rank).unwrap();
            for alpha in rs.roots() {
                let h = rs.dual_element(alpha).unwrap();
                for i in 1..=rank {
                    let x = rs.dual_element(&rs.simple_root(i).unwrap()).unwrap();
                    let lhs = rs.killing(&h, &x);
                    let rhs = rs.root_pairing(alpha, &x);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn a1_dual_normalization() {
        // For su(2): B(h, h) = 8 on the coroot with alpha(h) = 2, so
        // H_alpha = h/4 and alpha(H_alpha) = 1/2.
        let rs = RootSystem::type_a(1).unwrap();
        let alpha = rs.simple_root(1).unwrap();
        let h = rs.dual_element(&alpha).unwrap();
        assert_eq!(rs.root_pairing(&alpha, &h).value, rat(1, 2));
    }

    #[test]
    fn duality_is_linear() {
        let rs = RootSystem::type_a(2).unwrap();
        let a1 = rs.simple_root(1).unwrap();
        let a2 = rs.simple_root(2).unwrap();
        let sum = rs.root_from_coeffs(vec![1, 1]).unwrap();
        let lhs = rs.dual_element(&sum).unwrap();
        let rhs = rs.dual_element(&a1).unwrap().add(&rs.dual_element(&a2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn not_a_root_rejected() {
        let rs = RootSystem::type_a(2).unwrap();
        assert!(matches!(
            rs.root_from_coeffs(vec![2, 0]),
            Err(RootSystemError::NotARoot(_))
        ));
    }

    #[test]
    fn hermitian_symmetric_pairs() {
        let p = RootSystem::hermitian_symmetric_pair(1, 1).unwrap();
        assert_eq!(p.n_dim, 1);
        let p = RootSystem::hermitian_symmetric_pair(2, 1).unwrap();
        assert_eq!(p.n_dim, 2);
        let rs = &p.root_system;
        let bzz = rs.killing(&p.z_element, &p.z_element);
        assert_eq!(bzz.value, rat(-4, 1));
        assert!(!bzz.imaginary);
        let p = RootSystem::hermitian_symmetric_pair(3, 2).unwrap();
        assert_eq!(p.n_dim, 4);
        assert!(RootSystem::hermitian_symmetric_pair(3, 4).is_err());
    }

    #[test]
    fn hsp_invariants_all_nodes() {
        // alpha(Z) = i on the complement; B(Z,Z) = -2 n_dim; sums of two
        // complementary positive roots are never roots.
        for rank in 1..=4 {
            for node in 1..=rank {
                let p = RootSystem::hermitian_symmetric_pair(rank, node).unwrap();
                let rs = &p.root_system;
                assert_eq!(p.n_dim, node * (rank + 1 - node));
                for alpha in &p.flag.r_n_pos {
                    let v = rs.root_pairing(alpha, &p.z_element);
                    assert!(v.imaginary);
                    assert_eq!(v.value, rat(1, 1));
                }
                let bzz = rs.killing(&p.z_element, &p.z_element);
                assert_eq!(bzz.value, rat(-2 * p.n_dim as i64, 1));
                for a in &p.flag.r_n_pos {
                    for b in &p.flag.r_n_pos {
                        let sum: Vec<i64> = a
                            .coeffs()
                            .iter()
                            .zip(b.coeffs())
                            .map(|(x, y)| x + y)
                            .collect();
                        assert!(!rs.is_root(&Root(sum)));
                    }
                }
            }
        }
    }

    #[test]
    fn hsp_dual_sum_identity() {
        // sum_{alpha in R_n^+} H_alpha = -(i/2) Z, checked for CP^3.
        let p = RootSystem::hermitian_symmetric_pair(3, 1).unwrap();
        let rs = &p.root_system;
        let mut sum = CartanVector::zero(3);
        for r in &p.flag.r_n_pos {
            sum = sum.add(&rs.dual_element(r).unwrap());
        }
        let expected = p.z_element.times_i().scale(&rat(-1, 2));
        assert_eq!(sum, expected);
    }

    #[test]
    fn full_flag_a3() {
        let rs = RootSystem::type_a(3).unwrap();
        let flag = rs.flag(&[1, 2, 3]).unwrap();
        assert_eq!(flag.module_count(), 6);
        assert_eq!(flag.center_dim, 3);
        assert!(flag.r_h.is_empty());
        // n-matrix rows are the simple-root coordinates of the non-simple
        // classes, ordered lexicographically by signature.
        let rows: Vec<Vec<Rat>> = flag.n_matrix.clone();
        let expect: Vec<Vec<Rat>> = vec![
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 1), rat(1, 1)],
        ];
        for e in &expect {
            assert!(rows.contains(e), "missing n-matrix row {e:?}");
        }
    }

    #[test]
    fn a2_painted_one_node() {
        let rs = RootSystem::type_a(2).unwrap();
        let flag = rs.flag(&[1]).unwrap();
        assert_eq!(flag.center_dim, 1);
        assert_eq!(flag.module_count(), 1);
        let m: Vec<Vec<i64>> = flag.modules[0].iter().map(|r| r.coeffs().to_vec()).collect();
        assert!(m.contains(&vec![1, 0]));
        assert!(m.contains(&vec![1, 1]));
        // Closure of the module under the h-action (gamma-string closure).
        let gamma = rs.simple_root(2).unwrap();
        for beta in &flag.modules[0] {
            for sign in [1i64, -1] {
                let shifted = Root(
                    beta.coeffs()
                        .iter()
                        .zip(gamma.coeffs())
                        .map(|(b, g)| b + sign * g)
                        .collect(),
                );
                if rs.is_root(&shifted) && !flag.r_h.contains(&shifted) && shifted.is_positive() {
                    assert!(flag.modules[0].contains(&shifted));
                }
            }
        }
    }

    #[test]
    fn module_closure_under_isotropy_action() {
        // (R_j ± gamma) ∩ R ⊆ R_j for every gamma in r_h, all flags of A2-A4.
        for rank in 2..=4 {
            let rs = RootSystem::type_a(rank).unwrap();
            for painted in all_painted_subsets(rank) {
                let flag = rs.flag(&painted).unwrap();
                for module in &flag.modules {
                    for beta in module {
                        for gamma in &flag.r_h {
                            let shifted = Root(
                                beta.coeffs()
                                    .iter()
                                    .zip(gamma.coeffs())
                                    .map(|(b, g)| b + g)
                                    .collect(),
                            );
                            if rs.is_root(&shifted) {
                                assert!(
                                    module.contains(&shifted),
                                    "module not closed: {painted:?} {beta:?} {gamma:?}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn flag_partition_is_exact() {
        for rank in 1..=4 {
            let rs = RootSystem::type_a(rank).unwrap();
            for painted in all_painted_subsets(rank) {
                let flag = rs.flag(&painted).unwrap();
                assert_eq!(
                    flag.r_h.len() + 2 * flag.r_n_pos.len(),
                    rs.roots().len(),
                    "partition size"
                );
                assert_eq!(flag.center_dim, painted.len());
                let total: usize = flag.modules.iter().map(Vec::len).sum();
                assert_eq!(total, flag.r_n_pos.len());
            }
        }
    }

    #[test]
    fn empty_painted_rejected() {
        let rs = RootSystem::type_a(3).unwrap();
        assert!(matches!(
            rs.flag(&[]),
            Err(RootSystemError::BadPaintedSet { .. })
        ));
        assert!(rs.flag(&[4]).is_err());
    }

    #[test]
    fn gamma_strings_a2() {
        let rs = RootSystem::type_a(2).unwrap();
        let a1 = rs.simple_root(1).unwrap();
        let a2 = rs.simple_root(2).unwrap();
        let a12 = rs.root_from_coeffs(vec![1, 1]).unwrap();
        assert_eq!(rs.gamma_string(&a1, &a2).unwrap(), (0, 1));
        assert_eq!(rs.gamma_string(&a12, &a2).unwrap(), (-1, 0));
        assert_eq!(
            rs.gamma_string(&a1, &a1.neg()).unwrap_err(),
            RootSystemError::ParallelRoots
        );
    }

    #[test]
    fn gamma_string_sum_identity_exhaustive() {
        // sum_{k=p}^{q} (beta + k gamma, gamma) = 0 over all of A2 and A3.
        for rank in [2usize, 3] {
            let rs = RootSystem::type_a(rank).unwrap();
            for beta in rs.roots() {
                for gamma in rs.roots() {
                    if beta == gamma || *beta == gamma.neg() {
                        continue;
                    }
                    let (p, q) = rs.gamma_string(beta, gamma).unwrap();
                    assert!(p <= 0 && 0 <= q);
                    let hg = rs.dual_element(gamma).unwrap();
                    let mut sum = Rat::zero();
                    for k in p..=q {
                        let shifted = Root(
                            beta.coeffs()
                                .iter()
                                .zip(gamma.coeffs())
                                .map(|(b, g)| b + k * g)
                                .collect(),
                        );
                        assert!(rs.is_root(&shifted));
                        sum += rs.root_pairing(&shifted, &hg).value;
                    }
                    assert!(sum.is_zero(), "string sum failed for {beta:?},{gamma:?}");
                }
            }
        }
    }

    #[test]
    fn zeta_examples() {
        let rs = RootSystem::type_a(3).unwrap();
        let flag = rs.flag(&[1, 2, 3]).unwrap();
        // Module containing alpha1+alpha2 has zeta = H_1 + H_2.
        let target = rs.root_from_coeffs(vec![1, 1, 0]).unwrap();
        let j = flag.module_of(&target).unwrap();
        let zeta = rs.zeta(&flag, j).unwrap();
        let expect = rs
            .dual_element(&rs.simple_root(1).unwrap())
            .unwrap()
            .add(&rs.dual_element(&rs.simple_root(2).unwrap()).unwrap());
        assert_eq!(zeta, expect);

        let rs2 = RootSystem::type_a(2).unwrap();
        let flag2 = rs2.flag(&[1]).unwrap();
        let z1 = rs2.zeta(&flag2, 1).unwrap();
        let expect2 = rs2
            .dual_element(&rs2.simple_root(1).unwrap())
            .unwrap()
            .add(&rs2.dual_element(&rs2.root_from_coeffs(vec![1, 1]).unwrap()).unwrap());
        assert_eq!(z1, expect2);
        let h2 = rs2.dual_element(&rs2.simple_root(2).unwrap()).unwrap();
        assert!(rs2.killing(&z1, &h2).is_zero());
        assert!(rs2.zeta(&flag2, 2).is_err());
    }

    #[test]
    fn zeta_centrality_all_flags() {
        // B(zeta_j, H_gamma) = 0 for every gamma in r_h: the gamma-string
        // lemma reproduced by direct computation, for all flags of A2-A4.
        for rank in 2..=4 {
            let rs = RootSystem::type_a(rank).unwrap();
            for painted in all_painted_subsets(rank) {
                let flag = rs.flag(&painted).unwrap();
                for j in 1..=flag.module_count() {
                    let zeta = rs.zeta(&flag, j).unwrap();
                    for gamma in &flag.r_h {
                        let hg = rs.dual_element(gamma).unwrap();
                        assert!(
                            rs.killing(&zeta, &hg).is_zero(),
                            "zeta not central for {painted:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hsp_zeta_is_z_over_minus_two_i() {
        // Single-module pair: zeta_1 = -(i/2) Z.
        let p = RootSystem::hermitian_symmetric_pair(2, 1).unwrap();
        let rs = &p.root_system;
        let zeta = rs.zeta(&p.flag, 1).unwrap();
        assert_eq!(zeta, p.z_element.times_i().scale(&rat(-1, 2)));
    }

    #[test]
    fn koszul_element() {
        // A1 pair: delta_kappa = (1/2) H_alpha = -(i/4) Z.
        let p = RootSystem::hermitian_symmetric_pair(1, 1).unwrap();
        let rs = &p.root_system;
        let dk = rs.koszul_delta(&p.flag);
        let alpha = rs.simple_root(1).unwrap();
        assert_eq!(dk, rs.dual_element(&alpha).unwrap().scale(&rat(1, 2)));
        assert_eq!(dk, p.z_element.times_i().scale(&rat(-1, 4)));

        // A3 full flag: half the sum of all six duals; positive pairing with
        // every complementary dual.
        let rs = RootSystem::type_a(3).unwrap();
        let flag = rs.flag(&[1, 2, 3]).unwrap();
        let dk = rs.koszul_delta(&flag);
        let mut sum = CartanVector::zero(3);
        for r in &flag.r_n_pos {
            sum = sum.add(&rs.dual_element(r).unwrap());
        }
        assert_eq!(dk, sum.scale(&rat(1, 2)));
        for alpha in &flag.r_n_pos {
            let h = rs.dual_element(alpha).unwrap();
            assert!(rs.killing(&dk, &h).value.is_positive());
        }
    }

    #[test]
    fn koszul_positivity_all_flags() {
        for rank in 1..=4 {
            let rs = RootSystem::type_a(rank).unwrap();
            for painted in all_painted_subsets(rank) {
                let flag = rs.flag(&painted).unwrap();
                let dk = rs.koszul_delta(&flag);
                for alpha in &flag.r_n_pos {
                    let h = rs.dual_element(alpha).unwrap();
                    assert!(rs.killing(&dk, &h).value.is_positive());
                }
            }
        }
    }

    #[test]
    fn n_matrix_relation_exact() {
        // zeta_i = sum_j n_ij zeta_j for every non-simple class, exactly.
        for rank in 2..=4 {
            let rs = RootSystem::type_a(rank).unwrap();
            for painted in all_painted_subsets(rank) {
                let flag = rs.flag(&painted).unwrap();
                let t = flag.center_dim;
                for (row, i) in (t..flag.module_count()).enumerate() {
                    let zi = rs.zeta(&flag, i + 1).unwrap();
                    let mut acc = CartanVector::zero(rank);
                    for j in 0..t {
                        let zj = rs.zeta(&flag, j + 1).unwrap();
                        acc = acc.add(&zj.scale(&flag.n_matrix[row][j]));
                    }
                    assert_eq!(acc, zi);
                    // Coefficients are nonnegative (rational in general).
                    for c in &flag.n_matrix[row] {
                        assert!(!c.is_negative());
                    }
                }
            }
        }
    }

    #[test]
    fn n_matrix_fractional_example() {
        // A3 painted {1,3}: zeta_3 = (1/2) zeta_1 + (1/2) zeta_2.
        let rs = RootSystem::type_a(3).unwrap();
        let flag = rs.flag(&[1, 3]).unwrap();
        assert_eq!(flag.module_count(), 3);
        assert_eq!(flag.n_matrix, vec![vec![rat(1, 2), rat(1, 2)]]);
    }
}
