//! Shared fixtures for the criterion benchmarks.

use cartan_core::algebra::Element;
use cartan_core::cartan::KalkmanFamily;
use cartan_core::lie::{IdealSpec, LieAlgebraData};
use cartan_core::models::{circle_model, t2_model};
use cartan_core::operation::{tensor_product, Operation};
use cartan_core::reduction::{Reduction, ReductionSetup};
use cartan_core::scalar::rat_int;
use cartan_core::weil::{build_weil, WeilAlgebra};

pub fn weil_su2() -> WeilAlgebra {
    build_weil(&LieAlgebraData::su2()).expect("W_su2")
}

pub fn u1_circle_tensor() -> Operation {
    let u1 = build_weil(&LieAlgebraData::abelian(1)).expect("W_u1");
    tensor_product(&u1.op, &circle_model()).expect("tensor")
}

pub fn brst_family() -> KalkmanFamily {
    let u1 = build_weil(&LieAlgebraData::abelian(1)).expect("W_u1");
    KalkmanFamily::new(&u1, &circle_model(), KalkmanFamily::identity_t(1)).expect("family")
}

pub fn t2_reduction() -> Reduction {
    let op = t2_model(&rat_int(0));
    let ideal = IdealSpec::new(&op.lie, vec![0]).expect("ideal");
    let theta = vec![Element::generator_named(&op.algebra, "x").expect("x")];
    Reduction::new(ReductionSetup { op, ideal, theta }).expect("reduction")
}
