//! Small finitely presented operations used as standing examples and CLI
//! fixtures: the circle model, torus models with a weighted second
//! contraction, the frame model of a group, the polynomial coefficient
//! algebra `S g*`, and the trivial operation.

use std::sync::Arc;

use crate::algebra::{Algebra, Element, GeneratorSpec};
use crate::derivation::Derivation;
use crate::error::KernelError;
use crate::lie::LieAlgebraData;
use crate::operation::Operation;
use crate::scalar::Rational;
use crate::weil::exterior_operation;

/// `Lambda[x]` with `d x = 0`, `L_1 = 0`, `I_1 x = 1` for `G = u(1)`:
/// the algebraic model of the circle with its rotation action.
pub fn circle_model() -> Operation {
    let lie = LieAlgebraData::abelian(1);
    let algebra = Algebra::new(vec![GeneratorSpec::new("x", 1)]).expect("circle algebra");
    let d = Derivation::zero(&algebra, 1);
    let l = Derivation::zero(&algebra, 0);
    let i = Derivation::new(&algebra, -1, vec![Element::one(&algebra)]).expect("contraction");
    Operation::new(algebra, lie, d, vec![l], vec![i]).expect("circle model")
}

/// `Lambda[x]` acted on by the 2-torus: `I_1 x = 1`, `I_2 x = weight`,
/// everything else zero. The first factor acts freely; a nonzero weight
/// gives the complementary direction a nontrivial moment map.
pub fn t2_model(weight: &Rational) -> Operation {
    let lie = LieAlgebraData::abelian(2);
    let algebra = Algebra::new(vec![GeneratorSpec::new("x", 1)]).expect("t2 algebra");
    let d = Derivation::zero(&algebra, 1);
    let l = Derivation::zero(&algebra, 0);
    let i1 = Derivation::new(&algebra, -1, vec![Element::one(&algebra)]).expect("i1");
    let i2 = Derivation::new(&algebra, -1, vec![Element::one(&algebra).scale(weight)]).expect("i2");
    Operation::new(algebra, lie, d, vec![l.clone(), l], vec![i1, i2]).expect("t2 model")
}

/// The frame model of SU(2): `Lambda[x1,x2,x3]` with the Koszul
/// differential, coadjoint Lie derivatives and dual contractions. The
/// assignment `x^i` is a flat connection on it.
pub fn su2_frame_model() -> Operation {
    exterior_operation(&LieAlgebraData::su2(), "x").expect("frame model")
}

/// The polynomial algebra on even degree-2 generators with the coadjoint
/// Lie derivative, zero differential and zero contraction. This is
/// coefficient data for Cartan-model constructions, not a geometric
/// operation: the Cartan formula (d4) fails on it whenever the coadjoint
/// action is nontrivial.
pub fn sgstar_operation(
    lie: &Arc<LieAlgebraData>,
    prefix: &str,
) -> Result<Operation, KernelError> {
    let n = lie.dim;
    let gens = (1..=n)
        .map(|i| GeneratorSpec::new(format!("{prefix}{i}"), 2))
        .collect();
    let algebra = Algebra::new(gens)?;
    let d = Derivation::zero(&algebra, 1);
    let mut lie_derivative = Vec::with_capacity(n);
    for k in 0..n {
        let mut images = vec![Element::zero(&algebra); n];
        for j in 0..n {
            let mut img = Element::zero(&algebra);
            for l in 0..n {
                let c = lie.bracket_coeff(j, k, l);
                if !num_traits::Zero::is_zero(c) {
                    img = img.add(&Element::generator(&algebra, l)?.scale(&-c.clone()))?;
                }
            }
            images[j] = img;
        }
        lie_derivative.push(Derivation::new(&algebra, 0, images)?);
    }
    let contraction = (0..n).map(|_| Derivation::zero(&algebra, -1)).collect();
    Operation::new(algebra, Arc::clone(lie), d, lie_derivative, contraction)
}

/// The operation with no generators (just scalars) and zero structure maps.
pub fn trivial_operation(lie: &Arc<LieAlgebraData>) -> Operation {
    let algebra = Algebra::trivial();
    let d = Derivation::zero(&algebra, 1);
    let l = (0..lie.dim).map(|_| Derivation::zero(&algebra, 0)).collect();
    let i = (0..lie.dim).map(|_| Derivation::zero(&algebra, -1)).collect();
    Operation::new(algebra, Arc::clone(lie), d, l, i).expect("trivial operation")
}
