//! The contratensor product N ⊙_C P and the comodule-contramodule
//! correspondence Φ_C = C ⊙_C - and Ψ_C = Hom_C(C, -), with the adjunction
//! unit, counit and triangle identities checked on sample objects.

use crate::coalgebra::{CDGCoalgebra, Comodule, RightComodule};
use crate::contramodule::{hom_carrier, Contramodule};
use crate::graded::{
    associator_inv, dual_space, subquotients, tensor_basis, tensor_index_map, tensor_map,
    tensor_space, Degree, GradedError, GradedMap, GradedSpace, Result,
};
use crate::hom::MapScheme;
use crate::matrix::Mat;
use std::collections::BTreeMap;

/// Degreewise right inverse of a surjective degree-0 map.
pub fn section_of(proj: &GradedMap) -> Result<GradedMap> {
    let mut out = GradedMap::zero(proj.target.clone(), proj.source.clone(), 0);
    for t in proj.target.support() {
        if !out.known.contains(t) {
            continue;
        }
        let q = proj.target.dim(t)?;
        if q == 0 {
            continue;
        }
        let b = proj.block(t)?;
        let s = b
            .solve(&Mat::identity(b.field, q))
            .ok_or_else(|| GradedError::Invalid("projection is not surjective".into()))?;
        out.set_block(t, s);
    }
    Ok(out)
}

/// Whether a map out of the total space descends to the quotient: f must
/// agree with f ∘ section ∘ proj.
fn descends(f: &GradedMap, proj: &GradedMap, section: &GradedMap) -> Result<bool> {
    let again = f.compose(section)?.compose(proj)?;
    Ok(f.equals_where_known(&again)?.0)
}

/// The contratensor product N ⊙_C P: coequalizer of the contraaction- and
/// coaction-induced maps N (x) Hom_k(C,P) ⇉ N (x) P, with the induced
/// differential.
pub struct Contratensor {
    pub space: GradedSpace,
    /// N (x) P -> N ⊙_C P.
    pub proj: GradedMap,
    pub section: GradedMap,
    pub d: GradedMap,
}

pub fn contratensor(n: &RightComodule, p: &Contramodule) -> Result<Contratensor> {
    let c = &n.coalgebra;
    let cd = dual_space(&c.space);
    let h = hom_carrier(c, &p.space)?;
    let id_n = GradedMap::identity(&n.space);
    let m1 = tensor_map(&id_n, &p.alpha)?;

    // coaction + evaluation: n (x) (φ (x) q) -> n_(0) φ(n_(1)) (x) q
    let s_space = tensor_space(&n.space, &h)?;
    let t_space = tensor_space(&n.space, &p.space)?;
    let mut m2 = GradedMap::zero(s_space.clone(), t_space.clone(), 0);
    for g in s_space.support() {
        if !m2.known.contains(g) {
            continue;
        }
        let cols = tensor_basis(&n.space, &h, g);
        let idx = tensor_index_map(&n.space, &p.space, g);
        let mut block = Mat::zero(s_space.field, t_space.dim(g)?, s_space.dim(g)?);
        for (col, &(x, a, m, q)) in cols.iter().enumerate() {
            let (s, i, u, j) = tensor_basis(&cd, &p.space, m)[q];
            let rho = match n.coaction.block(x) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let rows = tensor_basis(&n.space, &c.space, x);
            for (r, &(y, b, z, k)) in rows.iter().enumerate() {
                if z != -s || k != i {
                    continue;
                }
                let mut v = rho.get(r, a);
                if v.is_zero() {
                    continue;
                }
                // evaluation sign (-1)^{s(u+1)}: the unique choice making the
                // relation image stable under the tensor differential
                if s.rem_euclid(2) == 1 && u.rem_euclid(2) == 0 {
                    v = -v;
                }
                block.add_to(idx[&(y, b, u, j)], col, v);
            }
        }
        if !block.is_zero() {
            m2.set_block(g, block);
        }
    }

    let coeq = subquotients(&m1.sub(&m2)?)?;
    let proj = coeq.cokernel_proj;
    let section = section_of(&proj)?;
    let d_t = tensor_map(&n.d, &GradedMap::identity(&p.space))?
        .add(&tensor_map(&id_n, &p.d)?)?;
    let pd = proj.compose(&d_t)?;
    if !descends(&pd, &proj, &section)? {
        return Err(GradedError::Invalid(
            "differential does not descend to the contratensor product".into(),
        ));
    }
    let d = pd.compose(&section)?;
    Ok(Contratensor { space: coeq.cokernel, proj, section, d })
}

/// Φ_C(P) = C ⊙_C P with the left comodule structure induced by Δ (x) id.
pub struct PhiImage {
    pub source: Contramodule,
    pub comodule: Comodule,
    /// C (x) P -> Φ(P).
    pub proj: GradedMap,
    pub section: GradedMap,
}

pub fn phi(p: &Contramodule) -> Result<PhiImage> {
    let c = &p.coalgebra;
    let n = crate::coalgebra::regular_right_comodule(c);
    let ct = contratensor(&n, p)?;
    let id_p = GradedMap::identity(&p.space);
    let id_c = GradedMap::identity(&c.space);
    let lam = tensor_map(&id_c, &ct.proj)?
        .compose(&associator_inv(&c.space, &c.space, &p.space)?)?
        .compose(&tensor_map(&c.comul, &id_p)?)?;
    if !descends(&lam, &ct.proj, &ct.section)? {
        return Err(GradedError::Invalid("coaction does not descend to Φ(P)".into()));
    }
    let coaction = lam.compose(&ct.section)?;
    let comodule = Comodule {
        name: format!("Φ({})", p.name),
        coalgebra: c.clone(),
        space: ct.space,
        coaction,
        d: ct.d,
    };
    Ok(PhiImage { source: p.clone(), comodule, proj: ct.proj, section: ct.section })
}

/// Φ on a morphism of contramodules: the map induced by id_C (x) u.
pub fn phi_map(from: &PhiImage, to: &PhiImage, u: &GradedMap) -> Result<GradedMap> {
    let id_c = GradedMap::identity(&from.source.coalgebra.space);
    let lifted = to.proj.compose(&tensor_map(&id_c, u)?)?;
    if !descends(&lifted, &from.proj, &from.section)? {
        return Err(GradedError::Invalid("map does not descend through Φ".into()));
    }
    lifted.compose(&from.section)
}

/// Ψ_C(N) = Hom_C(C, N): the space of graded comodule morphisms C -> N,
/// computed degreewise by a linear solve, with the contraaction given by
/// precomposition with the φ-weighted slice x -> ± x_(1) φ(x_(2)).
pub struct PsiImage {
    pub source: Comodule,
    pub contramodule: Contramodule,
    pub basis: BTreeMap<Degree, Vec<GradedMap>>,
    schemes: BTreeMap<Degree, MapScheme>,
    basis_mats: BTreeMap<Degree, Mat>,
}

/// Flattened colinearity defect of a morphism candidate f: C -> N.
fn colinearity_defect(n: &Comodule, f: &GradedMap) -> Result<GradedMap> {
    let id_c = GradedMap::identity(&n.coalgebra.space);
    let lhs = n.coaction.compose(f)?;
    let rhs = tensor_map(&id_c, f)?.compose(&n.coalgebra.comul)?;
    lhs.sub(&rhs)
}

pub fn psi(n: &Comodule) -> Result<PsiImage> {
    let c = &n.coalgebra;
    if !c.space.known.is_full() || !n.space.known.is_full() {
        return Err(GradedError::NotTotal("Ψ needs finite carriers".into()));
    }
    let cs = c.space.support();
    let ns = n.space.support();
    let mut basis: BTreeMap<Degree, Vec<GradedMap>> = BTreeMap::new();
    let mut schemes = BTreeMap::new();
    let mut basis_mats = BTreeMap::new();
    let mut carrier = GradedSpace::new(c.space.field, crate::graded::Interval::full());
    if !cs.is_empty() && !ns.is_empty() {
        let t_min = ns.first().unwrap() - cs.last().unwrap();
        let t_max = ns.last().unwrap() - cs.first().unwrap();
        let target = tensor_space(&c.space, &n.space)?;
        for t in t_min..=t_max {
            let scheme = MapScheme::new(&c.space, &n.space, t);
            if scheme.is_empty() {
                continue;
            }
            let out_scheme = MapScheme::new(&c.space, &target, t);
            let mut sys = Mat::zero(c.space.field, out_scheme.len(), scheme.len());
            for k in 0..scheme.len() {
                let mut e = Mat::zero(c.space.field, scheme.len(), 1);
                e.set(k, 0, c.space.field.one());
                let defect = colinearity_defect(n, &scheme.to_map(&e))?;
                let (flat, _) = out_scheme.flatten(&defect);
                for r in 0..flat.rows {
                    let v = flat.get(r, 0);
                    if !v.is_zero() {
                        sys.set(r, k, v);
                    }
                }
            }
            let ker = sys.kernel();
            if ker.cols == 0 {
                continue;
            }
            let mut fs = Vec::new();
            let mut mat = Mat::zero(c.space.field, scheme.len(), ker.cols);
            for j in 0..ker.cols {
                let coords = ker.column(j);
                for r in 0..coords.rows {
                    mat.set(r, j, coords.get(r, 0));
                }
                fs.push(scheme.to_map(&coords));
                carrier.push_basis(t, &format!("f{t}.{j}"));
            }
            basis.insert(t, fs);
            schemes.insert(t, scheme);
            basis_mats.insert(t, mat);
        }
    }

    let img = PsiImage {
        source: n.clone(),
        contramodule: Contramodule {
            name: format!("Ψ({})", n.name),
            coalgebra: c.clone(),
            space: carrier.clone(),
            alpha: GradedMap::zero(
                tensor_space(&dual_space(&c.space), &carrier)?,
                carrier.clone(),
                0,
            ),
            d: GradedMap::zero(carrier.clone(), carrier.clone(), 1),
        },
        basis,
        schemes,
        basis_mats,
    };

    // differential: f -> d_N ∘ f - (-1)^{|f|} f ∘ d_C
    let mut d = GradedMap::zero(carrier.clone(), carrier.clone(), 1);
    for (&t, fs) in &img.basis {
        for (j, f) in fs.iter().enumerate() {
            let a = n.d.compose(f)?;
            let b = f.compose(&c.d)?;
            let df = if t.rem_euclid(2) == 1 { a.add(&b)? } else { a.sub(&b)? };
            let coords = img.express(&df)?;
            for r in 0..coords.rows {
                let v = coords.get(r, 0);
                if !v.is_zero() {
                    d.add_entry(t, r, j, v);
                }
            }
        }
    }

    // contraaction: (φ (x) f) -> f ∘ (c -> φ(c_(1)) c_(2))
    let cd = dual_space(&c.space);
    let h = tensor_space(&cd, &carrier)?;
    let mut alpha = GradedMap::zero(h.clone(), carrier.clone(), 0);
    for g in h.support() {
        for (col, (s, i, t, j)) in tensor_basis(&cd, &carrier, g).into_iter().enumerate() {
            let f = &img.basis[&t][j];
            let slice = slice_map(c, s, i)?;
            let fm = f.compose(&slice)?;
            let coords = img.express(&fm)?;
            for r in 0..coords.rows {
                let v = coords.get(r, 0);
                if !v.is_zero() {
                    alpha.add_entry(g, r, col, v);
                }
            }
        }
    }

    let mut out = img;
    out.contramodule.d = d;
    out.contramodule.alpha = alpha;
    Ok(out)
}

/// The φ-weighted slice C -> C, x -> (-1)^{|φ||x_(1)|} x_(1) φ(x_(2)), for
/// the dual basis functional φ = (basis i of C^{-s})*.
fn slice_map(c: &CDGCoalgebra, s: Degree, i: usize) -> Result<GradedMap> {
    let mut out = GradedMap::zero(c.space.clone(), c.space.clone(), s);
    for z in c.space.support() {
        if !out.known.contains(z) || c.space.dim(z + s).unwrap_or(0) == 0 {
            continue;
        }
        // x_(1) has degree z + s, so the Koszul sign is (-1)^{s(z+s)}
        let sign_neg = s.rem_euclid(2) == 1 && z.rem_euclid(2) == 0;
        let delta = c.comul.block(z)?;
        let rows = tensor_basis(&c.space, &c.space, z);
        for col in 0..delta.cols {
            for (r, &(_z1, a1, z2, a2)) in rows.iter().enumerate() {
                if z2 != -s || a2 != i {
                    continue;
                }
                let v = delta.get(r, col);
                if !v.is_zero() {
                    out.add_entry(z, a1, col, if sign_neg { -v } else { v });
                }
            }
        }
    }
    Ok(out)
}

impl PsiImage {
    /// Coordinates of a comodule morphism in the computed basis.
    pub fn express(&self, f: &GradedMap) -> Result<Mat> {
        let t = f.degree;
        let dim = self.contramodule.space.dim(t).unwrap_or(0);
        match self.schemes.get(&t) {
            None => {
                if f.is_zero_where_known() {
                    Ok(Mat::zero(f.field(), dim, 1))
                } else {
                    Err(GradedError::Invalid(
                        "morphism outside the computed Hom degrees".into(),
                    ))
                }
            }
            Some(scheme) => {
                let (flat, _) = scheme.flatten(f);
                self.basis_mats[&t]
                    .solve(&flat)
                    .ok_or_else(|| GradedError::Invalid("not a comodule morphism".into()))
            }
        }
    }
}

/// Ψ on a morphism of comodules: f -> v ∘ f in basis coordinates.
pub fn psi_map(from: &PsiImage, to: &PsiImage, v: &GradedMap) -> Result<GradedMap> {
    let mut out = GradedMap::zero(
        from.contramodule.space.clone(),
        to.contramodule.space.clone(),
        v.degree,
    );
    for (&t, fs) in &from.basis {
        for (j, f) in fs.iter().enumerate() {
            let coords = to.express(&v.compose(f)?)?;
            for r in 0..coords.rows {
                let val = coords.get(r, 0);
                if !val.is_zero() {
                    out.add_entry(t, r, j, val);
                }
            }
        }
    }
    Ok(out)
}

/// The adjunction unit P -> Ψ(Φ(P)): p -> (c -> [c (x) p]).
pub fn unit_map(p_img: &PhiImage, psi_img: &PsiImage) -> Result<GradedMap> {
    let p = &p_img.source;
    let c = &p.coalgebra;
    let t_space = tensor_space(&c.space, &p.space)?;
    let mut out = GradedMap::zero(
        p.space.clone(),
        psi_img.contramodule.space.clone(),
        0,
    );
    for u in p.space.support() {
        for j in 0..p.space.dim(u)? {
            // x -> x (x) p_j as a map C -> C (x) P of degree u
            let mut ins = GradedMap::zero(c.space.clone(), t_space.clone(), u);
            for z in c.space.support() {
                if !ins.known.contains(z) {
                    continue;
                }
                let idx = tensor_index_map(&c.space, &p.space, z + u);
                // sign (-1)^{|p||x|}, the Koszul cost of the degree-u map
                // crossing x, making the class map colinear
                let v = if u.rem_euclid(2) == 1 && z.rem_euclid(2) == 1 {
                    -c.space.field.one()
                } else {
                    c.space.field.one()
                };
                for k in 0..c.space.dim(z)? {
                    ins.set_entry(z, idx[&(z, k, u, j)], k, v.clone());
                }
            }
            let g = p_img.proj.compose(&ins)?;
            let coords = psi_img.express(&g)?;
            for r in 0..coords.rows {
                let v = coords.get(r, 0);
                if !v.is_zero() {
                    out.add_entry(u, r, j, v);
                }
            }
        }
    }
    Ok(out)
}

/// The adjunction counit Φ(Ψ(N)) -> N, induced by evaluation c (x) f -> f(c).
pub fn counit_map(psi_img: &PsiImage, phi_img: &PhiImage) -> Result<GradedMap> {
    let n = &psi_img.source;
    let c = &n.coalgebra;
    let carrier = &psi_img.contramodule.space;
    let t_space = tensor_space(&c.space, carrier)?;
    let mut ev = GradedMap::zero(t_space.clone(), n.space.clone(), 0);
    for g in t_space.support() {
        if !ev.known.contains(g) {
            continue;
        }
        for (col, (z, k, t, j)) in tensor_basis(&c.space, carrier, g).into_iter().enumerate() {
            let f = &psi_img.basis[&t][j];
            // evaluation with the argument on the left: (-1)^{|c||f|} f(c)
            let sign_neg = z.rem_euclid(2) == 1 && t.rem_euclid(2) == 1;
            let b = f.block(z)?;
            for r in 0..b.rows {
                let v = b.get(r, k);
                if !v.is_zero() {
                    ev.add_entry(g, r, col, if sign_neg { -v } else { v });
                }
            }
        }
    }
    if !descends(&ev, &phi_img.proj, &phi_img.section)? {
        return Err(GradedError::Invalid("evaluation does not descend to Φ(Ψ(N))".into()));
    }
    ev.compose(&phi_img.section)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exterior, truncated_polynomial};
    use crate::coalgebra::{
        check_comodule, cofree_comodule, dual_coalgebra, trivial_coalgebra,
    };
    use crate::contramodule::{check_contramodule, free_contramodule};
    use crate::graded::Interval;
    use crate::scalar::Field;

    fn sample_space(field: Field) -> (GradedSpace, GradedMap) {
        let mut v = GradedSpace::new(field, Interval::full());
        v.push_basis(0, "v0");
        v.push_basis(1, "v1");
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1);
        d.set_entry(0, 0, 0, field.one());
        (v, d)
    }

    #[test]
    fn contratensor_over_trivial_coalgebra_is_plain_tensor() {
        let c = trivial_coalgebra(Field::Rationals);
        let (v, dv) = sample_space(Field::Rationals);
        let p = free_contramodule(&c, &v, &dv, "P").unwrap();
        let n = crate::coalgebra::regular_right_comodule(&c);
        let ct = contratensor(&n, &p).unwrap();
        assert!(ct.space.same_dims(&p.space));
    }

    #[test]
    fn phi_of_free_is_cofree_shaped() {
        for (name, a) in [
            ("ext2", exterior(Field::Rationals, 2)),
            ("ext1", exterior(Field::Prime(5), 1)),
            ("trunc", truncated_polynomial(Field::Rationals, 2, 3)),
        ] {
            let c = dual_coalgebra(&a).unwrap();
            let (v, dv) = sample_space(c.field());
            let p = free_contramodule(&c, &v, &dv, "P").unwrap();
            let img = phi(&p).unwrap();
            let rep = check_comodule(&img.comodule);
            assert!(rep.passed(), "{name}: {rep}");
            // C ⊙_C Hom_k(C,V) has the underlying size of C (x) V
            let cv = tensor_space(&c.space, &v).unwrap();
            assert!(img.comodule.space.same_dims(&cv), "{name}");
        }
    }

    #[test]
    fn psi_of_cofree_is_free_shaped() {
        for (name, a) in [
            ("ext2", exterior(Field::Rationals, 2)),
            ("ext1", exterior(Field::Prime(5), 1)),
        ] {
            let c = dual_coalgebra(&a).unwrap();
            let (v, dv) = sample_space(c.field());
            let n = cofree_comodule(&c, &v, &dv, "C⊗V").unwrap();
            let img = psi(&n).unwrap();
            let rep = check_contramodule(&img.contramodule);
            assert!(rep.passed(), "{name}: {rep}");
            // Hom_C(C, C (x) V) has the underlying size of Hom_k(C, V)
            let hv = hom_carrier(&c, &v).unwrap();
            assert!(img.contramodule.space.same_dims(&hv), "{name}");
        }
    }

    #[test]
    fn unit_and_counit_are_isomorphisms_on_free_and_cofree() {
        let a = exterior(Field::Prime(7), 1);
        let c = dual_coalgebra(&a).unwrap();
        let (v, dv) = sample_space(Field::Prime(7));

        let p = free_contramodule(&c, &v, &dv, "P").unwrap();
        let phi_p = phi(&p).unwrap();
        let psi_phi_p = psi(&phi_p.comodule).unwrap();
        let eta = unit_map(&phi_p, &psi_phi_p).unwrap();
        for t in p.space.support() {
            let b = eta.block(t).unwrap();
            assert_eq!(b.rank(), p.space.dim(t).unwrap(), "unit not injective at {t}");
            assert_eq!(b.rows, b.cols, "unit not square at {t}");
        }

        let n = cofree_comodule(&c, &v, &dv, "C⊗V").unwrap();
        let psi_n = psi(&n).unwrap();
        let phi_psi_n = phi(&psi_n.contramodule).unwrap();
        let eps = counit_map(&psi_n, &phi_psi_n).unwrap();
        for t in n.space.support() {
            let b = eps.block(t).unwrap();
            assert_eq!(b.rank(), n.space.dim(t).unwrap(), "counit not surjective at {t}");
            assert_eq!(b.rows, b.cols, "counit not square at {t}");
        }
    }

    #[test]
    fn triangle_identities() {
        let a = exterior(Field::Rationals, 2);
        let c = dual_coalgebra(&a).unwrap();
        let (v, dv) = sample_space(Field::Rationals);

        // Φ(η_P) followed by ε_{Φ(P)} is the identity of Φ(P)
        let p = free_contramodule(&c, &v, &dv, "P").unwrap();
        let phi_p = phi(&p).unwrap();
        let psi_phi_p = psi(&phi_p.comodule).unwrap();
        let eta = unit_map(&phi_p, &psi_phi_p).unwrap();
        let phi_psi_phi_p = phi(&psi_phi_p.contramodule).unwrap();
        let phi_eta = phi_map(&phi_p, &phi_psi_phi_p, &eta).unwrap();
        let eps_phi = counit_map(&psi_phi_p, &phi_psi_phi_p).unwrap();
        let comp = eps_phi.compose(&phi_eta).unwrap();
        let id = GradedMap::identity(&phi_p.comodule.space);
        assert!(comp.equals_where_known(&id).unwrap().0, "ΦΨΦ triangle fails");

        // η_{Ψ(N)} followed by Ψ(ε_N) is the identity of Ψ(N)
        let n = cofree_comodule(&c, &v, &dv, "C⊗V").unwrap();
        let psi_n = psi(&n).unwrap();
        let phi_psi_n = phi(&psi_n.contramodule).unwrap();
        let psi_phi_psi_n = psi(&phi_psi_n.comodule).unwrap();
        let eta2 = unit_map(&phi_psi_n, &psi_phi_psi_n).unwrap();
        let eps = counit_map(&psi_n, &phi_psi_n).unwrap();
        let psi_eps = psi_map(&psi_phi_psi_n, &psi_n, &eps).unwrap();
        let comp2 = psi_eps.compose(&eta2).unwrap();
        let id2 = GradedMap::identity(&psi_n.contramodule.space);
        assert!(comp2.equals_where_known(&id2).unwrap().0, "ΨΦΨ triangle fails");
    }
}
