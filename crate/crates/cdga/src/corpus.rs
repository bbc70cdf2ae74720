//! Seeded random corpora for the property batteries: square-zero CDG-algebras
//! (valid by construction, plus deliberate mutants), random modules over them
//! and random closed maps. Every generator is a pure function of its seed.

use crate::algebra::{AlgebraSpec, CDGAlgebra};
use crate::graded::{Degree, GradedSpace, Result};
use crate::hom::closed_maps;
use crate::module::{
    cone, direct_sum, free_module, shift_module, trivial_module, CDGModule, ModMap,
};
use crate::scalar::{Field, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_scalar(field: Field, r: &mut ChaCha8Rng) -> Scalar {
    field.from_i64(r.gen_range(1..=3))
}

/// A generated algebra together with what its axiom check must report.
#[derive(Debug, Clone)]
pub struct AlgebraCase {
    pub algebra: CDGAlgebra,
    pub expect_pass: bool,
    pub description: String,
}

/// Random square-zero extension k·1 ⊕ V with V·V = 0. The differential maps
/// disjoint source vectors to target vectors one degree up, so d² = 0; the
/// curvature is a degree-2 vector killed by d, and [h, −] = 0 because all
/// V-products vanish. Mutants break one axiom on purpose:
/// - a d-chain of length two gives d² ≠ 0 = [h, −];
/// - a product landing on a d-source with d-closed factors breaks Leibniz.
pub fn random_algebra(field: Field, seed: u64) -> AlgebraCase {
    let mut r = rng(seed);
    let mutation = r.gen_range(0u8..4); // 0, 1 valid; 2, 3 mutants
    let nv = if mutation >= 2 { r.gen_range(1..=2) } else { r.gen_range(1..=5) };

    let mut basis: Vec<(String, Degree)> = vec![("1".into(), 0)];
    let mut degs: Vec<Degree> = Vec::new();
    for i in 0..nv {
        let d = r.gen_range(-2..=3);
        degs.push(d);
        basis.push((format!("e{i}"), d));
    }

    // pair sources with targets one degree up; targets stay d-closed
    let mut differentials: Vec<(String, Vec<(String, Scalar)>)> = Vec::new();
    let mut used: Vec<bool> = vec![false; nv];
    for i in 0..nv {
        if used[i] || !r.gen_bool(0.6) {
            continue;
        }
        if let Some(j) = (0..nv).find(|&j| j != i && !used[j] && degs[j] == degs[i] + 1) {
            used[i] = true;
            used[j] = true;
            differentials.push((
                format!("e{i}"),
                vec![(format!("e{j}"), small_scalar(field, &mut r))],
            ));
        }
    }

    // curvature among d-closed degree-2 vectors
    let sources: Vec<String> = differentials.iter().map(|(l, _)| l.clone()).collect();
    let mut curvature: Vec<(String, Scalar)> = Vec::new();
    if r.gen_bool(0.5) {
        if let Some(i) =
            (0..nv).find(|&i| degs[i] == 2 && !sources.contains(&format!("e{i}")))
        {
            curvature.push((format!("e{i}"), small_scalar(field, &mut r)));
        }
    }

    let mut products: Vec<(String, String, Vec<(String, Scalar)>)> = Vec::new();
    let description;
    let expect_pass;
    match mutation {
        2 => {
            // d-chain u0 -> u1 -> u2: d²(u0) = u2 but [h, u0] = 0
            basis.push(("u0".into(), 0));
            basis.push(("u1".into(), 1));
            basis.push(("u2".into(), 2));
            differentials.push(("u0".into(), vec![("u1".into(), field.one())]));
            differentials.push(("u1".into(), vec![("u2".into(), field.one())]));
            description = "mutant: d² ≠ [h, −]".into();
            expect_pass = false;
        }
        3 => {
            // x·y = u0 with d(u0) = u1 while d(x) = d(y) = 0
            basis.push(("u0".into(), 0));
            basis.push(("u1".into(), 1));
            basis.push(("x".into(), 1));
            basis.push(("y".into(), -1));
            differentials.push(("u0".into(), vec![("u1".into(), field.one())]));
            products.push(("x".into(), "y".into(), vec![("u0".into(), field.one())]));
            description = "mutant: Leibniz fails on x·y".into();
            expect_pass = false;
        }
        _ => {
            description = "square-zero extension".into();
            expect_pass = true;
        }
    }

    let spec = AlgebraSpec {
        name: format!("R{seed}"),
        basis,
        unit: "1".into(),
        products,
        differentials,
        curvature,
        window: None,
    };
    AlgebraCase {
        algebra: spec.build(field).expect("generated spec is well-formed"),
        expect_pass,
        description,
    }
}

/// Random generator space with small dimensions in a narrow degree band.
pub fn random_generators(field: Field, r: &mut ChaCha8Rng, max_gens: usize) -> GradedSpace {
    let mut v = GradedSpace::total(field);
    let n = r.gen_range(1..=max_gens);
    for i in 0..n {
        v.push_basis(r.gen_range(-1..=2), &format!("g{i}"));
    }
    v
}

/// Random complex as a module through the augmentation: the positive part of
/// the algebra and the curvature act by zero, so any square-zero d works.
/// Differentials pair disjoint sources with targets one degree up.
fn random_trivial_module(a: &CDGAlgebra, r: &mut ChaCha8Rng) -> CDGModule {
    let field = a.field();
    let mut v = GradedSpace::total(field);
    let n = r.gen_range(1..=3);
    let mut degs = Vec::new();
    for i in 0..n {
        let d = r.gen_range(-1..=2);
        degs.push(d);
        v.push_basis(d, &format!("t{i}"));
    }
    let mut d = crate::graded::GradedMap::zero(v.clone(), v.clone(), 1);
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || !r.gen_bool(0.5) {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| j != i && !used[j] && degs[j] == degs[i] + 1) {
            used[i] = true;
            used[j] = true;
            let ri = v.labels(degs[i]).unwrap().iter().position(|l| l == &format!("t{i}"));
            let rj = v.labels(degs[j]).unwrap().iter().position(|l| l == &format!("t{j}"));
            d.add_entry(degs[i], rj.unwrap(), ri.unwrap(), small_scalar(field, r));
        }
    }
    trivial_module(a, v, d)
}

/// Random module over `a`. When the curvature vanishes: a free module on
/// random generators, sometimes shifted, summed or replaced by the cone of a
/// random closed map. A free module over a curved algebra is not a CDG-module
/// (d² = [h, −] there, not h·(−)), so curved algebras get trivial modules.
pub fn random_module(a: &CDGAlgebra, seed: u64) -> Result<CDGModule> {
    let mut r = rng(seed);
    if !a.h.is_zero() {
        let m = random_trivial_module(a, &mut r);
        return if r.gen_bool(0.3) { Ok(shift_module(&m, r.gen_range(-1..=1))) } else { Ok(m) };
    }
    let v = random_generators(a.field(), &mut r, 2);
    let free = free_module(a, &v, &format!("F{seed}"))?;
    match r.gen_range(0u8..4) {
        0 => Ok(free),
        1 => Ok(shift_module(&free, r.gen_range(-1..=1))),
        2 => {
            let w = random_generators(a.field(), &mut r, 2);
            let other = free_module(a, &w, &format!("G{seed}"))?;
            Ok(direct_sum(&free, &other)?.module)
        }
        _ => {
            let w = random_generators(a.field(), &mut r, 2);
            let other = free_module(a, &w, &format!("G{seed}"))?;
            match random_closed_map(&other, &free, 0, &mut r) {
                Some(f) => cone(&f),
                None => Ok(free),
            }
        }
    }
}

/// Random combination of the closed-map basis, or None when the space is 0.
pub fn random_closed_map(
    m: &CDGModule,
    n: &CDGModule,
    degree: Degree,
    r: &mut ChaCha8Rng,
) -> Option<ModMap> {
    let basis = closed_maps(m, n, degree);
    if basis.is_empty() {
        return None;
    }
    let field = m.field();
    let mut acc: Option<ModMap> = None;
    for f in &basis {
        let c = field.from_i64(r.gen_range(-1..=1));
        if c.is_zero() {
            continue;
        }
        let scaled = ModMap::new(m, n, f.map.scale(&c));
        acc = Some(match acc {
            None => scaled,
            Some(g) => g.add(&scaled).ok()?,
        });
    }
    acc.or_else(|| basis.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_cdg_algebra;
    use crate::module::check_cdg_module;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn generated_algebras_match_their_expectation() {
        let mut mutants = 0;
        for seed in 0..60 {
            let case = random_algebra(q(), seed);
            let rep = check_cdg_algebra(&case.algebra);
            assert_eq!(
                rep.passed(),
                case.expect_pass,
                "seed {seed} ({}): {}",
                case.description,
                rep
            );
            if !case.expect_pass {
                mutants += 1;
            }
        }
        assert!(mutants > 5, "mutation branch never exercised");
    }

    #[test]
    fn generated_modules_are_valid() {
        for seed in 0..12 {
            let case = random_algebra(q(), seed * 31 + 7);
            if !case.expect_pass {
                continue;
            }
            let m = random_module(&case.algebra, seed).unwrap();
            let rep = check_cdg_module(&m);
            assert!(rep.passed(), "seed {seed}: {rep}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_algebra(q(), 42);
        let b = random_algebra(q(), 42);
        assert_eq!(a.algebra, b.algebra);
        assert_eq!(a.expect_pass, b.expect_pass);
    }
}
