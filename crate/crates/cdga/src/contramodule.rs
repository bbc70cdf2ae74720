//! CDG-contramodules: graded spaces with a contraaction Hom_k(C,P) -> P.
//! The carrier Hom_k(C,P) is represented as C* (x) P through the sign-free
//! identification (c* (x) p)(x) = c*(x) p; all Koszul signs are carried by
//! the explicitly built differential on the Hom-carrier.

use crate::algebra::{push_map_identity, CDGAlgebra};
use crate::coalgebra::CDGCoalgebra;
use crate::graded::{
    dual_map_plain, dual_space, tensor_basis, tensor_index_map, tensor_map_unsigned,
    tensor_space, Degree, Element, GradedError, GradedMap, GradedSpace, Interval, Result,
};
use crate::matrix::Mat;
use crate::module::CDGModule;
use crate::report::{CheckReport, Verdict};
use serde::{Deserialize, Serialize};

/// The carrier of Hom_k(C,P): C* (x) P.
pub fn hom_carrier(c: &CDGCoalgebra, p: &GradedSpace) -> Result<GradedSpace> {
    tensor_space(&dual_space(&c.space), p)
}

/// The differential on Hom_k(C,P): d(F) = d_P ∘ F - (-1)^{|F|} F ∘ d_C,
/// expressed on the C* (x) P carrier.
pub fn hom_differential(c: &CDGCoalgebra, p: &GradedSpace, d_p: &GradedMap) -> Result<GradedMap> {
    let cd = dual_space(&c.space);
    let id_cd = GradedMap::identity(&cd);
    // post-composition term, sign-free
    let mut out = tensor_map_unsigned(&id_cd, d_p)?;
    // pre-composition term with the sign -(-1)^{|F|} applied per source degree
    let pre = tensor_map_unsigned(&dual_map_plain(&c.d), &GradedMap::identity(p))?;
    for t in pre.block_degrees() {
        if !out.known.contains(t) {
            continue;
        }
        let b = match pre.block(t) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let scale = if t.rem_euclid(2) == 1 {
            out.field().one()
        } else {
            -out.field().one()
        };
        let cur = out.block(t)?;
        out.set_block(t, cur.add(&b.scale(&scale)));
    }
    out.known = out.known.intersect(&pre.known);
    Ok(out)
}

/// P -> Hom_k(C,P): p -> (c -> ε(c) p).
pub fn counit_insertion(c: &CDGCoalgebra, p: &GradedSpace) -> Result<GradedMap> {
    let carrier = hom_carrier(c, p)?;
    let cd = dual_space(&c.space);
    let mut out = GradedMap::zero(p.clone(), carrier.clone(), 0);
    let eps = c.counit.block(0)?;
    for u in p.support() {
        if !out.known.contains(u) {
            continue;
        }
        let idx = tensor_index_map(&cd, p, u);
        for j in 0..p.dim(u)? {
            for r in 0..eps.cols {
                let v = eps.get(0, r);
                if v.is_zero() {
                    continue;
                }
                out.add_entry(u, idx[&(0, r, u, j)], j, v);
            }
        }
    }
    Ok(out)
}

/// P -> Hom_k(C,P): p -> (c -> h(c) p), the curvature insertion.
pub fn curvature_insertion(c: &CDGCoalgebra, p: &GradedSpace) -> Result<GradedMap> {
    let carrier = hom_carrier(c, p)?;
    let cd = dual_space(&c.space);
    let mut out = GradedMap::zero(p.clone(), carrier.clone(), 2);
    let hb = match c.h.block(-2) {
        Ok(b) => b,
        Err(_) => {
            out.known = out.known.intersect(&c.h.known.shift(2));
            return Ok(out);
        }
    };
    for u in p.support() {
        if !out.known.contains(u) {
            continue;
        }
        let idx = tensor_index_map(&cd, p, u + 2);
        for j in 0..p.dim(u)? {
            for r in 0..hb.cols {
                let v = hb.get(0, r);
                if v.is_zero() {
                    continue;
                }
                out.add_entry(u, idx[&(2, r, u, j)], j, v);
            }
        }
    }
    Ok(out)
}

/// Hom_k(C, Hom_k(C,P)) -> Hom_k(C,P): precomposition with Δ under the
/// closed-category identification Hom(C,Hom(C,P)) = Hom(C (x) C, P), which
/// flips arguments with the Koszul sign (the outer C*-letter reads c_(2)).
pub fn precompose_comul(c: &CDGCoalgebra, p: &GradedSpace) -> Result<GradedMap> {
    let cd = dual_space(&c.space);
    let h1 = hom_carrier(c, p)?;
    let h2 = tensor_space(&cd, &h1)?;
    let mut out = GradedMap::zero(h2.clone(), h1.clone(), 0);
    for n in h2.support() {
        if !out.known.contains(n) {
            continue;
        }
        let idx = tensor_index_map(&cd, p, n);
        let cols = tensor_basis(&cd, &h1, n);
        let mut block = Mat::zero(h2.field, h1.dim(n)?, h2.dim(n)?);
        for (col, &(s, i, m, q)) in cols.iter().enumerate() {
            let (t, j, u, l) = tensor_basis(&cd, p, m)[q];
            // value on c_k in C^{-s-t}: coefficient of c_i (x) c_j in Δ(c_k)
            let ck_deg = -s - t;
            let db = match c.comul.block(ck_deg) {
                Ok(b) => b,
                Err(_) => continue,
            };
            // Hom(C,Hom(C,P)) = Hom(C (x) C, P) flips the arguments with the
            // Koszul sign (-1)^{st}: the outer functional reads the second
            // Δ factor
            let rows = tensor_index_map(&c.space, &c.space, ck_deg);
            let row_in_delta = match rows.get(&(-t, j, -s, i)) {
                Some(&r) => r,
                None => continue,
            };
            let sign_neg = s.rem_euclid(2) == 1 && t.rem_euclid(2) == 1;
            for k in 0..db.cols {
                let v = db.get(row_in_delta, k);
                if v.is_zero() {
                    continue;
                }
                block.add_to(idx[&(s + t, k, u, l)], col, if sign_neg { -v } else { v });
            }
        }
        if !block.is_zero() {
            out.set_block(n, block);
        }
    }
    Ok(out)
}

/// A CDG-contramodule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contramodule {
    pub name: String,
    pub coalgebra: CDGCoalgebra,
    pub space: GradedSpace,
    /// Hom_k(C,P) -> P on the C* (x) P carrier, degree 0.
    pub alpha: GradedMap,
    pub d: GradedMap,
}

/// Per-axiom check of the CDG-contramodule laws.
pub fn check_contramodule(p: &Contramodule) -> CheckReport {
    check_contramodule_on(p, None, None, None, "")
}

/// Same axioms, with the identities involving the differential cut down to
/// the region where a truncated differential is exact: postcomposed with a
/// restriction of P, or precomposed with an inclusion into the functional
/// argument. `suffix` annotates the restricted items.
pub(crate) fn check_contramodule_on(
    p: &Contramodule,
    assoc_restrict: Option<&crate::module::Restrict>,
    commute_restrict: Option<&crate::module::Restrict>,
    square_restrict: Option<&crate::module::Restrict>,
    suffix: &str,
) -> CheckReport {
    let mut report = CheckReport::new(&p.name);
    let c = &p.coalgebra;
    let cd = dual_space(&c.space);
    let id_cd = GradedMap::identity(&cd);
    let id_p = GradedMap::identity(&p.space);

    let counity = (|| {
        let lhs = p.alpha.compose(&counit_insertion(c, &p.space)?)?;
        lhs.equals_where_known(&id_p)
    })();
    push_map_identity(&mut report, "counity of contraaction", counity);

    let contraassoc = (|| {
        let mut lhs = p.alpha.compose(&tensor_map_unsigned(&id_cd, &p.alpha)?)?;
        let mut rhs = p.alpha.compose(&precompose_comul(c, &p.space)?)?;
        if let Some(res) = assoc_restrict {
            lhs = res.apply(&lhs)?;
            rhs = res.apply(&rhs)?;
        }
        lhs.equals_where_known(&rhs)
    })();
    push_map_identity(
        &mut report,
        &format!(
            "contraassociativity{}",
            if assoc_restrict.is_some() { suffix } else { "" }
        ),
        contraassoc,
    );

    let commutes = (|| {
        let d_hom = hom_differential(c, &p.space, &p.d)?;
        let mut lhs = p.d.compose(&p.alpha)?;
        let mut rhs = p.alpha.compose(&d_hom)?;
        if let Some(res) = commute_restrict {
            lhs = res.apply(&lhs)?;
            rhs = res.apply(&rhs)?;
        }
        lhs.equals_where_known(&rhs)
    })();
    push_map_identity(&mut report, &format!("contraaction commutes with d{suffix}"), commutes);

    let square = (|| {
        let mut lhs = p.d.compose(&p.d)?;
        let mut rhs = p.alpha.compose(&curvature_insertion(c, &p.space)?)?;
        if let Some(res) = square_restrict {
            lhs = res.apply(&lhs)?;
            rhs = res.apply(&rhs)?;
        }
        lhs.equals_where_known(&rhs)
    })();
    push_map_identity(&mut report, &format!("d² = h·(-){suffix}"), square);

    report
}

/// The free contramodule Hom_k(C, V) on a complex (V, d_V): carrier C* (x) V
/// with the Hom-differential and the contraaction given by precomposition
/// with Δ.
pub fn free_contramodule(
    c: &CDGCoalgebra,
    v: &GradedSpace,
    d_v: &GradedMap,
    name: &str,
) -> Result<Contramodule> {
    let space = hom_carrier(c, v)?;
    let alpha = precompose_comul(c, v)?;
    let d = hom_differential(c, v, d_v)?;
    Ok(Contramodule {
        name: name.into(),
        coalgebra: c.clone(),
        space,
        alpha,
        d,
    })
}

/// A morphism of contramodules (graded; closedness is a separate property).
#[derive(Debug, Clone)]
pub struct ContraMap {
    pub source: Contramodule,
    pub target: Contramodule,
    pub map: GradedMap,
}

impl ContraMap {
    pub fn new(source: &Contramodule, target: &Contramodule, map: GradedMap) -> ContraMap {
        ContraMap { source: source.clone(), target: target.clone(), map }
    }

    pub fn identity(p: &Contramodule) -> ContraMap {
        ContraMap::new(p, p, GradedMap::identity(&p.space))
    }

    pub fn degree(&self) -> Degree {
        self.map.degree
    }

    /// D(f) = d_T ∘ f - (-1)^{|f|} f ∘ d_S.
    pub fn differential(&self) -> Result<GradedMap> {
        let a = self.target.d.compose(&self.map)?;
        let b = self.map.compose(&self.source.d)?;
        if self.map.degree.rem_euclid(2) == 1 {
            a.add(&b)
        } else {
            a.sub(&b)
        }
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.differential()?.is_zero_where_known())
    }

    /// Contramodule-morphism condition f ∘ α_S = α_T ∘ Hom(C, f) and,
    /// separately, closedness.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new("contramodule map");
        let cd = dual_space(&self.source.coalgebra.space);
        let id_cd = GradedMap::identity(&cd);
        let contralinear = (|| {
            let lhs = self.map.compose(&self.source.alpha)?;
            let rhs = self
                .target
                .alpha
                .compose(&tensor_map_unsigned(&id_cd, &self.map)?)?;
            lhs.equals_where_known(&rhs)
        })();
        push_map_identity(&mut report, "contralinearity", contralinear);
        match self.is_closed() {
            Ok(true) => report.push("closed", Verdict::Pass, self.map.known),
            Ok(false) => report.push(
                "closed",
                Verdict::Fail { witness: "D(f) ≠ 0".into() },
                self.map.known,
            ),
            Err(e) => report.push(
                "closed",
                Verdict::Skipped { reason: e.to_string() },
                Interval::empty(),
            ),
        }
        report
    }
}

/// The Koszul sign of the identification C* (x) P = Hom_k(C,P) with the
/// evaluation on the right: the diagonal map φ (x) p -> (-1)^{|φ||p|} φ (x) p.
/// Self-inverse.
pub fn pairing_sign(c: &CDGCoalgebra, p: &GradedSpace) -> Result<GradedMap> {
    let cd = dual_space(&c.space);
    let carrier = tensor_space(&cd, p)?;
    let mut out = GradedMap::zero(carrier.clone(), carrier.clone(), 0);
    for n in carrier.support() {
        if !out.known.contains(n) {
            continue;
        }
        for (col, (s, _i, u, _j)) in tensor_basis(&cd, p, n).into_iter().enumerate() {
            let v = if s.rem_euclid(2) == 1 && u.rem_euclid(2) == 1 {
                -carrier.field.one()
            } else {
                carrier.field.one()
            };
            out.set_entry(n, col, col, v);
        }
    }
    Ok(out)
}

/// The dual algebra C* of a finite coalgebra whose counit is a coordinate
/// projection. The product is the signed convolution
/// (φψ)(c) = (-1)^{|ψ||c_(1)|} φ(c_(1)) ψ(c_(2)).
pub fn dual_algebra(c: &CDGCoalgebra) -> Result<CDGAlgebra> {
    if !c.space.known.is_full() {
        return Err(GradedError::NotTotal("dual algebra needs a finite coalgebra".into()));
    }
    let space = dual_space(&c.space);
    let field = c.space.field;
    let eps = c.counit.block(0)?;
    let mut unit_index = None;
    for r in 0..eps.cols {
        let v = eps.get(0, r);
        if v.is_zero() {
            continue;
        }
        if unit_index.is_some() || v != field.one() {
            return Err(GradedError::Invalid(
                "counit is not a coordinate projection".into(),
            ));
        }
        unit_index = Some(r);
    }
    let unit_index =
        unit_index.ok_or_else(|| GradedError::Invalid("counit is zero".into()))?;

    let t2 = tensor_space(&space, &space)?;
    let mut mul = GradedMap::zero(t2.clone(), space.clone(), 0);
    for n in t2.support() {
        if !mul.known.contains(n) {
            continue;
        }
        let cols = tensor_basis(&space, &space, n);
        let mut block = Mat::zero(field, space.dim(n)?, t2.dim(n)?);
        for (col, &(s, i, t, j)) in cols.iter().enumerate() {
            let db = match c.comul.block(-n) {
                Ok(b) => b,
                Err(_) => continue,
            };
            // opposite reading order, matching the contraaction convention
            let rows = tensor_index_map(&c.space, &c.space, -n);
            let row_in_delta = match rows.get(&(-t, j, -s, i)) {
                Some(&r) => r,
                None => continue,
            };
            let sign_neg = s.rem_euclid(2) == 1 && t.rem_euclid(2) == 1;
            for k in 0..db.cols {
                let v = db.get(row_in_delta, k);
                if !v.is_zero() {
                    block.add_to(k, col, if sign_neg { -v } else { v });
                }
            }
        }
        if !block.is_zero() {
            mul.set_block(n, block);
        }
    }

    // d(φ) = -(-1)^{|φ|} φ ∘ d_C, matching the coalgebra dualization
    let plain = dual_map_plain(&c.d);
    let mut d = GradedMap::zero(space.clone(), space.clone(), 1);
    d.known = d.known.intersect(&plain.known);
    for t in plain.block_degrees() {
        let b = match plain.block(t) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let scale = if t.rem_euclid(2) == 1 { field.one() } else { -field.one() };
        d.set_block(t, b.scale(&scale));
    }

    let mut h = Element::zero(&space, 2)?;
    if let Ok(hb) = c.h.block(-2) {
        for r in 0..hb.cols {
            h.coords.set(r, 0, hb.get(0, r));
        }
    }

    Ok(CDGAlgebra {
        name: format!("({})*", c.name),
        space,
        mul,
        unit_index,
        d,
        h,
    })
}

/// Translation of a contramodule over a finite coalgebra into a module over
/// the dual algebra. The carrier Hom_k(C,P) equals C* (x) P; the action is
/// the contraaction conjugated by the pairing sign.
pub fn dual_translation(p: &Contramodule) -> Result<CDGModule> {
    let algebra = dual_algebra(&p.coalgebra)?;
    let action = p.alpha.compose(&pairing_sign(&p.coalgebra, &p.space)?)?;
    Ok(CDGModule {
        name: p.name.clone(),
        algebra,
        space: p.space.clone(),
        action,
        d: p.d.clone(),
    })
}

/// Inverse of `dual_translation`: a module over C* with action
/// C* (x) P -> P is read back as a contraaction through the same
/// (self-inverse) pairing sign.
pub fn contramodule_from_module(c: &CDGCoalgebra, m: &CDGModule) -> Result<Contramodule> {
    let alpha = m.action.compose(&pairing_sign(c, &m.space)?)?;
    Ok(Contramodule {
        name: m.name.clone(),
        coalgebra: c.clone(),
        space: m.space.clone(),
        alpha,
        d: m.d.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{check_cdg_algebra, exterior, truncated_polynomial};
    use crate::coalgebra::{check_cdg_coalgebra, dual_coalgebra, trivial_coalgebra};
    use crate::module::check_cdg_module;
    use crate::scalar::Field;

    fn sample_complex(field: Field) -> (GradedSpace, GradedMap) {
        let mut v = GradedSpace::new(field, Interval::full());
        v.push_basis(0, "v0");
        v.push_basis(1, "v1");
        let mut d = GradedMap::zero(v.clone(), v.clone(), 1);
        d.set_entry(0, 0, 0, field.one());
        (v, d)
    }

    #[test]
    fn free_contramodule_over_trivial_coalgebra() {
        let c = trivial_coalgebra(Field::Rationals);
        let (v, dv) = sample_complex(Field::Rationals);
        let p = free_contramodule(&c, &v, &dv, "Hom(k,V)").unwrap();
        let rep = check_contramodule(&p);
        assert!(rep.passed(), "{rep}");
        assert!(p.space.same_dims(&v));
    }

    #[test]
    fn free_contramodule_over_dual_of_exterior() {
        for gen in [1, 2] {
            let a = exterior(Field::Prime(5), gen);
            let c = dual_coalgebra(&a).unwrap();
            let (v, dv) = sample_complex(Field::Prime(5));
            let p = free_contramodule(&c, &v, &dv, "Hom(C,V)").unwrap();
            let rep = check_contramodule(&p);
            assert!(rep.passed(), "gen degree {gen}: {rep}");
        }
    }

    #[test]
    fn free_contramodule_over_curved_dual() {
        // curved square-zero fixture: d(u) = w, h = w
        let spec = crate::algebra::AlgebraSpec {
            name: "sq".into(),
            basis: vec![("1".into(), 0), ("u".into(), 1), ("w".into(), 2)],
            unit: "1".into(),
            products: vec![],
            differentials: vec![("u".into(), vec![("w".into(), Field::Rationals.one())])],
            curvature: vec![("w".into(), Field::Rationals.one())],
            window: None,
        };
        let a = spec.build(Field::Rationals).unwrap();
        let c = dual_coalgebra(&a).unwrap();
        assert!(check_cdg_coalgebra(&c).passed());
        let (v, dv) = sample_complex(Field::Rationals);
        let p = free_contramodule(&c, &v, &dv, "Hom(C,V)").unwrap();
        let rep = check_contramodule(&p);
        // over a curved coalgebra the plain Hom-differential squares to
        // F ∘ ((-)↼h - h⇀(-)), not the h-contraaction: the untwisted free
        // object is not a CDG-contramodule, mirroring how A (x) V needs a
        // connection over a curved algebra. The structural axioms still hold.
        for item in &rep.items {
            let ok = matches!(item.verdict, Verdict::Pass);
            if item.axiom.starts_with("d²") {
                assert!(!ok, "{rep}");
            } else {
                assert!(ok, "{rep}");
            }
        }
        // here d² vanishes while the h-contraaction does not
        assert!(p.d.compose(&p.d).unwrap().is_zero_where_known());
        let h_act = p
            .alpha
            .compose(&curvature_insertion(&c, &p.space).unwrap())
            .unwrap();
        assert!(!h_act.is_zero_where_known());
    }

    #[test]
    fn dual_algebra_of_dual_coalgebra_recovers_axioms() {
        let a = truncated_polynomial(Field::Rationals, 2, 3);
        let c = dual_coalgebra(&a).unwrap();
        let b = dual_algebra(&c).unwrap();
        let rep = check_cdg_algebra(&b);
        assert!(rep.passed(), "{rep}");
        // double dual: the grading comes back to the original
        assert!(b.space.same_dims(&a.space));
    }

    #[test]
    fn dual_translation_roundtrip_and_module_axioms() {
        let a = exterior(Field::Prime(7), 1);
        let c = dual_coalgebra(&a).unwrap();
        let (v, dv) = sample_complex(Field::Prime(7));
        let p = free_contramodule(&c, &v, &dv, "Hom(C,V)").unwrap();
        let m = dual_translation(&p).unwrap();
        let rep = check_cdg_module(&m);
        assert!(rep.passed(), "{rep}");
        let back = contramodule_from_module(&c, &m).unwrap();
        assert_eq!(back.alpha, p.alpha);
        assert_eq!(back.d, p.d);
        assert!(check_contramodule(&back).passed());
    }

    #[test]
    fn contramap_identity_is_closed_and_contralinear() {
        let a = exterior(Field::Rationals, 2);
        let c = dual_coalgebra(&a).unwrap();
        let (v, dv) = sample_complex(Field::Rationals);
        let p = free_contramodule(&c, &v, &dv, "P").unwrap();
        let id = ContraMap::identity(&p);
        assert!(id.check().passed());
    }
}
