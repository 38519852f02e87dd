//! Shared constructors for the reference systems exercised by the
//! integration suites. Not every suite uses every system.
#![allow(dead_code)]

use std::sync::Arc;

use quasilattice::ifs::{make_ifs, IfsSpec};
use quasilattice::ring::{FieldSpec, RingElement};

pub const GOLDEN: f64 = 1.618033988749895;

pub fn pentagonal_field() -> Arc<FieldSpec> {
    FieldSpec::cyclotomic(5).unwrap()
}

/// 1 + z + z^4, the element whose physical value is the golden ratio.
pub fn golden_elem(f: &Arc<FieldSpec>) -> RingElement {
    f.one()
        .try_add(&f.generator())
        .unwrap()
        .try_add(&f.generator_pow(4))
        .unwrap()
}

/// t = tau - 1 = z + z^4, the contraction scale of the conjugate system.
pub fn small_t(f: &Arc<FieldSpec>) -> RingElement {
    golden_elem(f).try_sub(&f.one()).unwrap()
}

/// The fifth roots of unity z, z^2, z^3, z^4, 1.
pub fn unit_ring(f: &Arc<FieldSpec>) -> Vec<RingElement> {
    (1..=5).map(|k| f.generator_pow(k)).collect()
}

pub fn basic_ifs() -> Arc<IfsSpec> {
    let f = pentagonal_field();
    make_ifs(&f, golden_elem(&f), unit_ring(&f)).unwrap()
}

pub fn scaled_ifs() -> Arc<IfsSpec> {
    let f = pentagonal_field();
    let maps = unit_ring(&f).iter().map(|z| z.scale(2)).collect();
    make_ifs(&f, golden_elem(&f), maps).unwrap()
}

pub fn negative_ifs() -> Arc<IfsSpec> {
    let f = pentagonal_field();
    make_ifs(&f, golden_elem(&f).neg(), unit_ring(&f)).unwrap()
}

/// beta = tau^2 with translations {0} and the ten tenth roots of unity.
pub fn hmv_ifs() -> Arc<IfsSpec> {
    let f = pentagonal_field();
    let mut maps = vec![f.zero()];
    maps.extend(unit_ring(&f));
    maps.extend(unit_ring(&f).iter().map(RingElement::neg));
    make_ifs(&f, golden_elem(&f).pow(2), maps).unwrap()
}

/// beta = tau^2 with translations z^k and t z^k.
pub fn coherent_ifs() -> Arc<IfsSpec> {
    let f = pentagonal_field();
    let t = small_t(&f);
    let mut maps = unit_ring(&f);
    maps.extend(unit_ring(&f).iter().map(|z| t.try_mul(z).unwrap()));
    make_ifs(&f, golden_elem(&f).pow(2), maps).unwrap()
}

/// The coherent system plus the zero translation (eleven maps).
pub fn windowb_ifs() -> Arc<IfsSpec> {
    let f = pentagonal_field();
    let t = small_t(&f);
    let mut maps = unit_ring(&f);
    maps.extend(unit_ring(&f).iter().map(|z| t.try_mul(z).unwrap()));
    maps.push(f.zero());
    make_ifs(&f, golden_elem(&f).pow(2), maps).unwrap()
}

/// Hand-picked seed set {0} + t z^k + (-t^2 z^k) for the eleven-map system.
pub fn windowb_seeds() -> Vec<RingElement> {
    let f = pentagonal_field();
    let t = small_t(&f);
    let t2 = t.pow(2);
    std::iter::once(f.zero())
        .chain((1..=5).map(|k| t.try_mul(&f.generator_pow(k)).unwrap()))
        .chain((1..=5).map(|k| t2.try_mul(&f.generator_pow(k)).unwrap().neg()))
        .collect()
}
