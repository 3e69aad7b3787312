//! The Weil algebra `W_g = S g* (x) Lambda g*` with generators `th^i` of
//! degree 1 and `Om^i` of degree 2, carrying
//!
//! ```text
//! d_W th^i = -1/2 C^i_jk th^j th^k + Om^i
//! d_W Om^i = -C^i_jk th^j Om^k
//! iota_j th^k = delta^k_j,  iota_j Om^k = 0
//! L_i = coadjoint action on both generator families
//! ```
//!
//! Also here: the exterior operation `Lambda g*` with the Koszul
//! differential (the algebraic frame model), Koszul's formula check, the
//! index-wise augmentation `th^i -> Om^i`, and the acyclicity report.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{Algebra, Element, GeneratorSpec};
use crate::derivation::Derivation;
use crate::error::KernelError;
use crate::lie::LieAlgebraData;
use crate::operation::Operation;
use crate::scalar::rat;

#[derive(Debug, Clone)]
pub struct WeilAlgebra {
    pub op: Operation,
}

impl WeilAlgebra {
    pub fn theta_index(&self, i: usize) -> usize {
        i
    }

    pub fn omega_index(&self, i: usize) -> usize {
        self.op.lie.dim + i
    }

    pub fn theta(&self, i: usize) -> Element {
        Element::generator(&self.op.algebra, self.theta_index(i)).expect("theta generator")
    }

    pub fn omega(&self, i: usize) -> Element {
        Element::generator(&self.op.algebra, self.omega_index(i)).expect("omega generator")
    }

    /// The index-wise isomorphism `span(th) -> span(Om)` extended linearly.
    /// Errors when the input is not linear in the `th^i`.
    pub fn augmentation(&self, w: &Element) -> Result<Element, KernelError> {
        let n = self.op.lie.dim;
        let mut out = Element::zero(&self.op.algebra);
        for (m, c) in w.terms() {
            let linear = m.powers.is_empty()
                && m.exterior.len() == 1
                && m.exterior[0] < n;
            if !linear {
                return Err(KernelError::NotLinear(w.render()));
            }
            out = out.add(&self.omega(m.exterior[0]).scale(c))?;
        }
        Ok(out)
    }

    /// Cohomology of the full Weil complex for degrees `0..=max_degree`;
    /// acyclicity means `(1, 0, ..., 0)` for every Lie algebra.
    pub fn acyclicity_dims(&self, max_degree: i64) -> Result<Vec<usize>, KernelError> {
        self.op.full_cohomology_dims(max_degree)
    }
}

/// Coadjoint Lie derivatives on a family of generators: the derivation with
/// `L_k(gen_offset + j) = -C^j_{k l} gen(offset + l)`.
fn coadjoint_images(
    algebra: &Arc<Algebra>,
    lie: &LieAlgebraData,
    k: usize,
    offset: usize,
    images: &mut [Element],
) -> Result<(), KernelError> {
    for j in 0..lie.dim {
        let mut img = Element::zero(algebra);
        for l in 0..lie.dim {
            let c = lie.bracket_coeff(j, k, l);
            if !c.is_zero() {
                img = img.add(&Element::generator(algebra, offset + l)?.scale(&-c.clone()))?;
            }
        }
        images[offset + j] = img;
    }
    Ok(())
}

/// `-1/2 C^i_{jk} x^j x^k` over a family of odd generators at `offset`.
fn koszul_image(
    algebra: &Arc<Algebra>,
    lie: &LieAlgebraData,
    i: usize,
    offset: usize,
) -> Result<Element, KernelError> {
    let mut img = Element::zero(algebra);
    for j in 0..lie.dim {
        for k in 0..lie.dim {
            let c = lie.bracket_coeff(i, j, k);
            if !c.is_zero() {
                let xj = Element::generator(algebra, offset + j)?;
                let xk = Element::generator(algebra, offset + k)?;
                img = img.add(&xj.mul(&xk)?.scale(&(rat(-1, 2) * c)))?;
            }
        }
    }
    Ok(img)
}

/// Build `W_g` with default generator names `th1.., Om1..`.
pub fn build_weil(lie: &Arc<LieAlgebraData>) -> Result<WeilAlgebra, KernelError> {
    build_weil_named(lie, "th", "Om")
}

/// Build `W_g` with custom name prefixes (handy when tensoring two Weil
/// algebras, whose generator names must stay distinct).
pub fn build_weil_named(
    lie: &Arc<LieAlgebraData>,
    theta_prefix: &str,
    omega_prefix: &str,
) -> Result<WeilAlgebra, KernelError> {
    lie.validate().map_err(|v| KernelError::LieData(v.to_string()))?;
    let n = lie.dim;
    let mut gens = Vec::with_capacity(2 * n);
    for i in 1..=n {
        gens.push(GeneratorSpec::new(format!("{theta_prefix}{i}"), 1));
    }
    for i in 1..=n {
        gens.push(GeneratorSpec::new(format!("{omega_prefix}{i}"), 2));
    }
    let algebra = Algebra::new(gens)?;

    // d_W
    let mut d_images = vec![Element::zero(&algebra); 2 * n];
    for i in 0..n {
        let omega = Element::generator(&algebra, n + i)?;
        d_images[i] = koszul_image(&algebra, lie, i, 0)?.add(&omega)?;
        // d_W Om^i = -C^i_{jk} th^j Om^k
        let mut img = Element::zero(&algebra);
        for j in 0..n {
            for k in 0..n {
                let c = lie.bracket_coeff(i, j, k);
                if !c.is_zero() {
                    let th = Element::generator(&algebra, j)?;
                    let om = Element::generator(&algebra, n + k)?;
                    img = img.add(&th.mul(&om)?.scale(&-c.clone()))?;
                }
            }
        }
        d_images[n + i] = img;
    }
    let d = Derivation::new(&algebra, 1, d_images)?;

    let mut lie_derivative = Vec::with_capacity(n);
    for k in 0..n {
        let mut images = vec![Element::zero(&algebra); 2 * n];
        coadjoint_images(&algebra, lie, k, 0, &mut images)?;
        coadjoint_images(&algebra, lie, k, n, &mut images)?;
        lie_derivative.push(Derivation::new(&algebra, 0, images)?);
    }

    let mut contraction = Vec::with_capacity(n);
    for j in 0..n {
        let mut images = vec![Element::zero(&algebra); 2 * n];
        images[j] = Element::one(&algebra);
        contraction.push(Derivation::new(&algebra, -1, images)?);
    }

    let op = Operation::new(Arc::clone(&algebra), Arc::clone(lie), d, lie_derivative, contraction)?;
    Ok(WeilAlgebra { op })
}

/// The exterior operation `Lambda g*` on odd degree-1 generators with the
/// Koszul differential `d x^i = -1/2 C^i_{jk} x^j x^k`, coadjoint Lie
/// derivatives and dual contractions. With `x^i` as the tautological
/// connection this is the algebraic frame model of the group itself.
pub fn exterior_operation(
    lie: &Arc<LieAlgebraData>,
    name_prefix: &str,
) -> Result<Operation, KernelError> {
    lie.validate().map_err(|v| KernelError::LieData(v.to_string()))?;
    let n = lie.dim;
    let gens = (1..=n)
        .map(|i| GeneratorSpec::new(format!("{name_prefix}{i}"), 1))
        .collect();
    let algebra = Algebra::new(gens)?;
    let d_images = (0..n)
        .map(|i| koszul_image(&algebra, lie, i, 0))
        .collect::<Result<Vec<_>, _>>()?;
    let d = Derivation::new(&algebra, 1, d_images)?;
    let mut lie_derivative = Vec::with_capacity(n);
    for k in 0..n {
        let mut images = vec![Element::zero(&algebra); n];
        coadjoint_images(&algebra, lie, k, 0, &mut images)?;
        lie_derivative.push(Derivation::new(&algebra, 0, images)?);
    }
    let mut contraction = Vec::with_capacity(n);
    for j in 0..n {
        let mut images = vec![Element::zero(&algebra); n];
        images[j] = Element::one(&algebra);
        contraction.push(Derivation::new(&algebra, -1, images)?);
    }
    Operation::new(algebra, Arc::clone(lie), d, lie_derivative, contraction)
}

/// Verify Koszul's formula `d = 1/2 th^k L_k` on every `Lambda g*` basis
/// monomial of degree `<= window`; returns the first witness, if any.
pub fn koszul_check(
    lie: &Arc<LieAlgebraData>,
    window: i64,
) -> Result<Option<(String, String)>, KernelError> {
    let op = exterior_operation(lie, "th")?;
    let n = lie.dim;
    for k in 0..=window {
        for m in op.algebra.basis_of_degree(k)? {
            let e = Element::monomial(&op.algebra, m);
            let lhs = op.d.evaluate(&e)?;
            let mut rhs = Element::zero(&op.algebra);
            for j in 0..n {
                let theta = Element::generator(&op.algebra, j)?;
                rhs = rhs.add(&theta.mul(&op.lie_derivative[j].evaluate(&e)?)?.scale(&rat(1, 2)))?;
            }
            let residual = lhs.sub(&rhs)?;
            if !residual.is_zero() {
                return Ok(Some((e.render(), residual.render())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operation::SubspaceKind;
    use crate::scalar::rat_int;

    #[test]
    fn weil_u1_differential() {
        let w = build_weil(&LieAlgebraData::abelian(1)).unwrap();
        // abelian: d th = Om, d Om = 0
        assert_eq!(w.op.d.evaluate(&w.theta(0)).unwrap(), w.omega(0));
        assert!(w.op.d.evaluate(&w.omega(0)).unwrap().is_zero());
        assert!(w.op.check_axioms(5).unwrap().is_empty());
    }

    #[test]
    fn weil_su2_generator_images() {
        let w = build_weil(&LieAlgebraData::su2()).unwrap();
        let a = &w.op.algebra;
        // d th1 = -th2*th3 + Om1
        let expect = crate::parse::parse_element("-th2*th3 + Om1", a).unwrap();
        assert_eq!(w.op.d.evaluate(&w.theta(0)).unwrap(), expect);
        // d Om1 = -(th2*Om3 - th3*Om2)
        let expect = crate::parse::parse_element("-th2*Om3 + th3*Om2", a).unwrap();
        assert_eq!(w.op.d.evaluate(&w.omega(0)).unwrap(), expect);
        assert!(w.op.check_axioms(4).unwrap().is_empty());
    }

    #[test]
    fn cartan_formula_on_weil_su2_generators() {
        // [iota_X, d_W]_s = L_X checked on every generator
        let w = build_weil(&LieAlgebraData::su2()).unwrap();
        for x in 0..3 {
            let lie_op = w.op.contraction[x].supercommutator(&w.op.d).unwrap();
            for g in 0..w.op.algebra.generator_count() {
                let gen = Element::generator(&w.op.algebra, g).unwrap();
                assert_eq!(
                    lie_op.evaluate(&gen).unwrap(),
                    w.op.lie_derivative[x].evaluate(&gen).unwrap(),
                    "generator {g}, direction {x}"
                );
            }
        }
    }

    #[test]
    fn augmentation_examples() {
        let w = build_weil(&LieAlgebraData::su2()).unwrap();
        assert_eq!(w.augmentation(&w.theta(0)).unwrap(), w.omega(0));
        assert!(w
            .augmentation(&Element::zero(&w.op.algebra))
            .unwrap()
            .is_zero());
        let lin = w
            .theta(0)
            .scale(&rat_int(2))
            .sub(&w.theta(1).scale(&rat_int(3)))
            .unwrap();
        let expect = w
            .omega(0)
            .scale(&rat_int(2))
            .sub(&w.omega(1).scale(&rat_int(3)))
            .unwrap();
        assert_eq!(w.augmentation(&lin).unwrap(), expect);
        assert!(w.augmentation(&w.omega(0)).is_err());
        assert!(w.augmentation(&w.theta(0).mul(&w.theta(1)).unwrap()).is_err());
    }

    #[test]
    fn koszul_formula_su2_and_top_degree() {
        let lie = LieAlgebraData::su2();
        assert_eq!(koszul_check(&lie, 3).unwrap(), None);
        // hand value: d th1 = -th2*th3 and top degree lands in zero
        let op = exterior_operation(&lie, "th").unwrap();
        let th1 = Element::generator(&op.algebra, 0).unwrap();
        let expect = crate::parse::parse_element("-th2*th3", &op.algebra).unwrap();
        assert_eq!(op.d.evaluate(&th1).unwrap(), expect);
        let top = crate::parse::parse_element("th1*th2*th3", &op.algebra).unwrap();
        assert!(op.d.evaluate(&top).unwrap().is_zero());
        // abelian: both sides vanish identically
        assert_eq!(koszul_check(&LieAlgebraData::abelian(2), 3).unwrap(), None);
    }

    #[test]
    fn acyclicity_small_cases() {
        let u1 = build_weil(&LieAlgebraData::abelian(1)).unwrap();
        assert_eq!(u1.acyclicity_dims(4).unwrap(), vec![1, 0, 0, 0, 0]);
        let t2 = build_weil(&LieAlgebraData::abelian(2)).unwrap();
        assert_eq!(t2.acyclicity_dims(4).unwrap(), vec![1, 0, 0, 0, 0]);
        let su2 = build_weil(&LieAlgebraData::su2()).unwrap();
        assert_eq!(su2.acyclicity_dims(3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn omega_contracts_lie_derivative_on_symmetric_part() {
        // Om^i L_i = 0 on S g* monomials (skew symmetry of the constants)
        let w = build_weil(&LieAlgebraData::su2()).unwrap();
        let a = &w.op.algebra;
        for k in 0..=6i64 {
            for m in a.basis_of_degree(k).unwrap() {
                if !m.exterior.is_empty() {
                    continue; // only the symmetric subalgebra
                }
                let e = Element::monomial(a, m);
                let mut acc = Element::zero(a);
                for i in 0..3 {
                    acc = acc
                        .add(&w.omega(i).mul(&w.op.lie_derivative[i].evaluate(&e).unwrap()).unwrap())
                        .unwrap();
                }
                assert!(acc.is_zero(), "Om^i L_i on {}", e.render());
            }
        }
    }

    #[test]
    fn weil_basic_subalgebra_u1() {
        let w = build_weil(&LieAlgebraData::abelian(1)).unwrap();
        // horizontal part of degree 2 is spanned by Om
        let hor = w.op.subspace_basis(SubspaceKind::Horizontal, 2).unwrap();
        assert_eq!(hor.len(), 1);
        assert_eq!(hor[0].render(), "Om1");
        // basic cohomology of W_u1 is the polynomial ring Q[Om]
        assert_eq!(
            w.op.basic_cohomology_dims(4).unwrap(),
            vec![1, 0, 1, 0, 1]
        );
    }

    #[test]
    fn su2_invariant_quadratic_casimir() {
        // degree-4 invariants of the coadjoint action on S g* are spanned by
        // the quadratic Casimir Om1^2 + Om2^2 + Om3^2
        let op = crate::models::sgstar_operation(&LieAlgebraData::su2(), "Om").unwrap();
        let casimir = crate::parse::parse_element("Om1^2+Om2^2+Om3^2", &op.algebra).unwrap();
        assert!(op.is_invariant(&casimir).unwrap());
        let inv = op.subspace_basis(SubspaceKind::Invariant, 4).unwrap();
        assert_eq!(inv.len(), 1);
        let got = &inv[0];
        let ratio = got
            .terms()
            .next()
            .map(|(m, c)| c.clone() / casimir.coefficient(m))
            .unwrap();
        assert_eq!(got, &casimir.scale(&ratio));
    }
}
