//! Weak-equivalence oracles for the projective and injective model
//! structures. Verdicts are always relative to a declared finite test family
//! and to the degree window on which the Hom complexes are exact; the report
//! carries both qualifiers.

use crate::algebra::CDGAlgebra;
use crate::bar::TruncatedBar;
use crate::contramodule::{free_contramodule, Contramodule};
use crate::graded::{Degree, GradedError, GradedMap, GradedSpace, Interval, Result};
use crate::hom::{
    cohomology_map, complex_cohomology, hom_complex, null_homotopy, post_compose_map,
    pre_compose_map,
};
use crate::module::{
    check_cdg_module, direct_sum, enumerate_twisted, CDGModule, ModMap,
};
use crate::report::{CheckReport, Verdict};
use crate::scalar::Scalar;
use crate::twist::{hom_tau_contramodule, hom_tau_module};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Twisted modules T; the oracle tests Hom_A(T, -).
    Projective,
    /// Cogenerators V = Homτ(A, W); the oracle tests Hom_A(-, V).
    Injective,
}

/// A finite family of test objects a weak-equivalence verdict is relative to.
#[derive(Debug, Clone)]
pub struct TestFamily {
    pub kind: FamilyKind,
    pub members: Vec<CDGModule>,
    pub provenance: String,
}

impl TestFamily {
    pub fn projective(members: Vec<CDGModule>, provenance: &str) -> TestFamily {
        TestFamily { kind: FamilyKind::Projective, members, provenance: provenance.into() }
    }

    pub fn injective(members: Vec<CDGModule>, provenance: &str) -> TestFamily {
        TestFamily { kind: FamilyKind::Injective, members, provenance: provenance.into() }
    }

    /// Every member must itself be a valid CDG-module.
    pub fn check(&self) -> CheckReport {
        let mut report = CheckReport::new(&format!("test family ({})", self.provenance));
        for m in &self.members {
            report.merge(check_cdg_module(m));
        }
        report
    }
}

/// The projective family enumerated from Tw(A): one batch of twisted modules
/// per generator-degree tuple.
pub fn projective_family(
    a: &CDGAlgebra,
    gen_degree_sets: &[Vec<Degree>],
    coeffs: Option<&[Scalar]>,
) -> Result<TestFamily> {
    let mut members = Vec::new();
    for (k, degs) in gen_degree_sets.iter().enumerate() {
        members.extend(enumerate_twisted(a, degs, coeffs, &format!("T{k}_"))?);
    }
    Ok(TestFamily::projective(
        members,
        &format!("enumerated Tw({}) over {} degree tuples", a.name, gen_degree_sets.len()),
    ))
}

/// Injective cogenerators Homτ(A, W) for cofree contramodules W = Hom(B̌A, V)
/// on finite complexes (V, d_V). Valid whenever the bar curvature functional
/// vanishes; the family check is the arbiter.
pub fn injective_family_cofree(
    b: &TruncatedBar,
    shapes: &[(GradedSpace, GradedMap)],
) -> Result<TestFamily> {
    let mut members = Vec::new();
    for (k, (v, dv)) in shapes.iter().enumerate() {
        let w = free_contramodule(&b.coalgebra, v, dv, &format!("W{k}"))?;
        members.push(hom_tau_module(b, &w)?);
    }
    Ok(TestFamily::injective(
        members,
        &format!("cofree contramodule cogenerators over {}", b.coalgebra.name),
    ))
}

/// Injective cogenerators Homτ(A, W) with W = Homτ(B̌A, M) for declared
/// finite modules M: these W satisfy the contramodule axioms for any
/// curvature.
pub fn injective_family_from_modules(
    b: &TruncatedBar,
    witnesses: &[CDGModule],
) -> Result<TestFamily> {
    let mut members = Vec::new();
    for m in witnesses {
        let w = hom_tau_contramodule(b, m)?;
        members.push(hom_tau_module(b, &w)?);
    }
    Ok(TestFamily::injective(
        members,
        &format!("Homτ cogenerators over {}", b.coalgebra.name),
    ))
}

/// Transpose of a coordinate projection between hom carriers: the inclusion
/// of the restricted sub-carrier.
fn carrier_incl(r: &GradedMap) -> Result<GradedMap> {
    let mut out = GradedMap::zero(r.target.clone(), r.source.clone(), 0);
    out.known = r.known;
    for g in r.block_degrees() {
        out.set_block(g, r.block(g)?.transpose());
    }
    Ok(out)
}

/// Projector on C* (x) (C* (x) V) keeping pairs of functionals whose word
/// lengths sum to at most cap. The contraassociativity constraint on a pair
/// (j, k) reads concatenated words of length j + k; pairs with j + k > N are
/// truncation artifacts.
fn word_pair_mask(b: &TruncatedBar, v: &GradedSpace, cap: usize) -> Result<GradedMap> {
    use crate::graded::{dual_map_plain, tensor_map_unsigned};
    let id_v = GradedMap::identity(v);
    let mut proj: Vec<GradedMap> = Vec::new();
    for j in 0..=cap {
        let inc = b.length_incl(j);
        proj.push(dual_map_plain(&inc.compose(&carrier_incl(&inc)?)?));
    }
    let mut q: Vec<GradedMap> = Vec::new();
    for j in 0..=cap {
        q.push(if j == 0 { proj[0].clone() } else { proj[j].sub(&proj[j - 1])? });
    }
    let mut mask: Option<GradedMap> = None;
    for j in 0..=cap {
        for k in 0..=(cap - j) {
            let term = tensor_map_unsigned(&q[j], &tensor_map_unsigned(&q[k], &id_v)?)?;
            mask = Some(match mask {
                Some(m) => m.add(&term)?,
                None => term,
            });
        }
    }
    Ok(mask.unwrap())
}

/// All finite-dimensional contramodules over the truncated bar with the
/// given generator degrees and zero differential: the contraaction is
/// evaluation on the empty word plus enumerated coefficients on the
/// counit-annihilated functional components. Candidates are filtered by the
/// contramodule axioms with the d-identities restricted to functional
/// components of word length < N: a contraaction over the genuine bar has
/// coefficients on all word lengths, and the constraints reading clipped
/// lengths are truncation artifacts.
pub fn enumerate_contramodules(
    b: &TruncatedBar,
    gen_degrees: &[Degree],
    coeffs: &[Scalar],
    name_prefix: &str,
) -> Result<Vec<Contramodule>> {
    use crate::contramodule::hom_carrier;
    use crate::graded::{dual_space, tensor_basis};

    let c = &b.coalgebra;
    let field = c.field();
    let mut v = GradedSpace::total(field);
    for (i, d) in gen_degrees.iter().enumerate() {
        v.push_basis(*d, &format!("p{i}"));
    }
    let carrier = hom_carrier(c, &v)?;
    let cd = dual_space(&c.space);
    let d_p = GradedMap::zero(v.clone(), v.clone(), 1);

    // e in C^0 with ε(e) = 1: the base contraaction is φ (x) p -> φ(e) p
    let eps = c.counit.block(0)?;
    let e_col = (0..eps.cols)
        .find(|&j| !eps.get(0, j).is_zero())
        .ok_or_else(|| GradedError::Invalid("coalgebra counit vanishes in degree 0".into()))?;
    let e_scale = eps.get(0, e_col).inv().unwrap();
    let mut base = GradedMap::zero(carrier.clone(), v.clone(), 0);
    for g in carrier.support() {
        if !base.known.contains(g) {
            continue;
        }
        for (col, &(t, i, u, j)) in tensor_basis(&cd, &v, g).iter().enumerate() {
            if t == 0 && i == e_col && u == g {
                base.add_entry(g, j, col, e_scale.clone());
            }
        }
    }

    // free slots: columns whose C-part functional kills the counit direction
    let mut slots: Vec<(Degree, usize, usize)> = Vec::new();
    for g in v.support() {
        if !carrier.known.contains(g) {
            continue;
        }
        for (col, &(t, i, _u, _j)) in tensor_basis(&cd, &v, g).iter().enumerate() {
            if t == 0 && i == e_col {
                continue;
            }
            let e_val = match c.counit.block(-t) {
                Ok(b) => b.get(0, i),
                Err(_) => continue,
            };
            if !e_val.is_zero() {
                continue;
            }
            for row in 0..v.dim(g)? {
                slots.push((g, row, col));
            }
        }
    }
    let total = (coeffs.len() as f64).powi(slots.len() as i32);
    if total > 2.0e5 {
        return Err(GradedError::Invalid(format!(
            "contraaction enumeration too large: {}^{} assignments",
            coeffs.len(),
            slots.len()
        )));
    }
    let i1 = carrier_incl(&crate::twist::word_restrict(b, &v, b.truncation.saturating_sub(1))?)?;
    let pair_mask = word_pair_mask(b, &v, b.truncation)?;
    let mut out: Vec<Contramodule> = Vec::new();
    let mut seen: Vec<String> = Vec::new();
    let mut counter = vec![0usize; slots.len()];
    loop {
        let mut alpha = base.clone();
        for (s, &(g, row, col)) in slots.iter().enumerate() {
            let cval = &coeffs[counter[s]];
            if !cval.is_zero() {
                alpha.add_entry(g, row, col, cval.clone());
            }
        }
        let cand = Contramodule {
            name: format!("{name_prefix}{}", out.len()),
            coalgebra: c.clone(),
            space: v.clone(),
            alpha,
            d: d_p.clone(),
        };
        if crate::contramodule::check_contramodule_on(
            &cand,
            Some(&crate::module::Restrict::Pre(&pair_mask)),
            Some(&crate::module::Restrict::Pre(&i1)),
            None,
            " (restricted)",
        )
        .passed()
        {
            let key = serde_json::to_string(&cand.alpha).unwrap();
            if !seen.contains(&key) {
                seen.push(key);
                out.push(cand);
            }
        }
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                return Ok(out);
            }
            counter[pos] += 1;
            if counter[pos] < coeffs.len() {
                break;
            }
            counter[pos] = 0;
            pos += 1;
        }
    }
}

/// Injective cogenerators Homτ(A, W) for every enumerated finite-dimensional
/// contramodule W with the given generator degrees.
pub fn injective_family_enumerated(
    b: &TruncatedBar,
    gen_degrees: &[Degree],
    coeffs: &[Scalar],
) -> Result<TestFamily> {
    let ws = enumerate_contramodules(b, gen_degrees, coeffs, "W")?;
    let mut members = Vec::new();
    for w in &ws {
        members.push(hom_tau_module(b, w)?);
    }
    Ok(TestFamily::injective(
        members,
        &format!(
            "enumerated finite-dimensional contramodules over {} ({} found)",
            b.coalgebra.name,
            ws.len()
        ),
    ))
}

/// Per-degree record of one family member's Hom-cohomology comparison.
#[derive(Debug, Clone)]
pub struct DegreeRecord {
    pub degree: Degree,
    pub h_source: usize,
    pub h_target: usize,
    pub rank: usize,
}

impl DegreeRecord {
    pub fn is_iso(&self) -> bool {
        self.h_source == self.h_target && self.rank == self.h_source
    }
}

#[derive(Debug, Clone)]
pub struct MemberRecord {
    pub member: String,
    pub rows: Vec<DegreeRecord>,
    pub verdict: Verdict,
}

/// Weak-equivalence verdict relative to a family and a Hom-degree window.
#[derive(Debug, Clone)]
pub struct WEReport {
    pub map: String,
    pub kind: FamilyKind,
    pub window: Interval,
    pub members: Vec<MemberRecord>,
}

impl WEReport {
    /// Conjunction over the family.
    pub fn is_weak_equivalence(&self) -> bool {
        self.members.iter().all(|m| !m.verdict.is_fail())
    }

    /// Members whose comparison fails: the witnesses of a negative verdict.
    pub fn witnesses(&self) -> Vec<&MemberRecord> {
        self.members.iter().filter(|m| m.verdict.is_fail()).collect()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let kind = match self.kind {
            FamilyKind::Projective => "projective",
            FamilyKind::Injective => "injective",
        };
        out.push_str(&format!(
            "{kind} weak-equivalence oracle for {} on {:?}\n",
            self.map, self.window
        ));
        for m in &self.members {
            let v = if m.verdict.is_fail() { "FAIL" } else { "pass" };
            out.push_str(&format!("  member {}: {v}\n", m.member));
            for r in &m.rows {
                out.push_str(&format!(
                    "    degree {}: dim H before {}, after {}, map rank {}\n",
                    r.degree, r.h_source, r.h_target, r.rank
                ));
            }
        }
        out
    }
}

fn member_verdict(rows: &[DegreeRecord], member: &str) -> Verdict {
    match rows.iter().find(|r| !r.is_iso()) {
        None => Verdict::Pass,
        Some(r) => Verdict::Fail {
            witness: format!(
                "{member} at degree {}: H {} -> {} with rank {}",
                r.degree, r.h_source, r.h_target, r.rank
            ),
        },
    }
}

/// Projective oracle: f is a weak equivalence relative to F when
/// Hom_A(T, f) is a quasi-isomorphism on [lo, hi] for every T in F.
pub fn we_projective(
    f: &ModMap,
    family: &TestFamily,
    lo: Degree,
    hi: Degree,
) -> Result<WEReport> {
    if family.kind != FamilyKind::Projective {
        return Err(GradedError::Invalid("projective oracle requires a projective family".into()));
    }
    if !f.is_closed()? {
        return Err(GradedError::NotClosed("weak-equivalence oracle requires a closed map".into()));
    }
    let mut members = Vec::new();
    for t in &family.members {
        let hx = hom_complex(t, &f.source, lo - 1, hi + 1)?;
        let hy = hom_complex(t, &f.target, lo - 1, hi + 1)?;
        let phi = post_compose_map(t, &hx, &hy, f)?;
        let mut rows = Vec::new();
        for deg in lo..=hi {
            let (mat, h_source, h_target) = cohomology_map(&hx.d, &hy.d, &phi, deg)?;
            rows.push(DegreeRecord { degree: deg, h_source, h_target, rank: mat.rank() });
        }
        let verdict = member_verdict(&rows, &t.name);
        members.push(MemberRecord { member: t.name.clone(), rows, verdict });
    }
    Ok(WEReport {
        map: format!("{} -> {}", f.source.name, f.target.name),
        kind: FamilyKind::Projective,
        window: Interval::range(lo, hi),
        members,
    })
}

/// Injective oracle: f is a weak equivalence relative to F when
/// Hom_A(f, V) is a quasi-isomorphism on [lo, hi] for every cogenerator V.
pub fn we_injective(
    f: &ModMap,
    family: &TestFamily,
    lo: Degree,
    hi: Degree,
) -> Result<WEReport> {
    if family.kind != FamilyKind::Injective {
        return Err(GradedError::Invalid("injective oracle requires an injective family".into()));
    }
    if !f.is_closed()? {
        return Err(GradedError::NotClosed("weak-equivalence oracle requires a closed map".into()));
    }
    let mut members = Vec::new();
    for v in &family.members {
        let hx = hom_complex(&f.target, v, lo - 1, hi + 1)?;
        let hy = hom_complex(&f.source, v, lo - 1, hi + 1)?;
        let phi = pre_compose_map(v, &hx, &hy, f)?;
        let mut rows = Vec::new();
        for deg in lo..=hi {
            let (mat, h_source, h_target) = cohomology_map(&hx.d, &hy.d, &phi, deg)?;
            rows.push(DegreeRecord { degree: deg, h_source, h_target, rank: mat.rank() });
        }
        let verdict = member_verdict(&rows, &v.name);
        members.push(MemberRecord { member: v.name.clone(), rows, verdict });
    }
    Ok(WEReport {
        map: format!("{} -> {}", f.source.name, f.target.name),
        kind: FamilyKind::Injective,
        window: Interval::range(lo, hi),
        members,
    })
}

/// Both oracles side by side. Disagreement indicates family insufficiency
/// (the families are finite stand-ins for infinite classes), not an error.
#[derive(Debug, Clone)]
pub struct Agreement {
    pub projective: WEReport,
    pub injective: WEReport,
}

impl Agreement {
    pub fn agree(&self) -> bool {
        self.projective.is_weak_equivalence() == self.injective.is_weak_equivalence()
    }

    pub fn render(&self) -> String {
        let mut out = self.projective.render();
        out.push_str(&self.injective.render());
        let tag = if self.agree() {
            "verdicts agree"
        } else {
            "verdicts disagree: family insufficiency"
        };
        out.push_str(&format!("{tag}\n"));
        out
    }
}

pub fn we_agreement(
    f: &ModMap,
    proj: &TestFamily,
    inj: &TestFamily,
    lo: Degree,
    hi: Degree,
) -> Result<Agreement> {
    Ok(Agreement {
        projective: we_projective(f, proj, lo, hi)?,
        injective: we_injective(f, inj, lo, hi)?,
    })
}

/// The extension 0 -> Y -> X -> M -> 0 classified by a closed degree-1 map
/// θ: M -> Y, with its inclusion and projection.
pub struct Extension {
    pub total: CDGModule,
    pub incl: ModMap,
    pub proj: ModMap,
}

pub fn extension(y: &CDGModule, m: &CDGModule, theta: &ModMap) -> Result<Extension> {
    if theta.degree() != 1 {
        return Err(GradedError::ShapeMismatch("extension class must have degree 1".into()));
    }
    if !theta.is_closed()? {
        return Err(GradedError::NotClosed("extension class must be closed".into()));
    }
    let sum = direct_sum(y, m)?;
    let connecting = sum
        .incl1
        .map
        .compose(&theta.map.compose(&sum.proj2.map)?)?;
    let mut x = sum.module;
    x.d = x.d.add(&connecting)?;
    x.name = format!("{} ⊕θ {}", y.name, m.name);
    let incl = ModMap::new(y, &x, sum.incl1.map.clone());
    let proj = ModMap::new(&x, m, sum.proj2.map.clone());
    Ok(Extension { total: x, incl, proj })
}

/// Splitting certificate: when Hom_A(M, Y) is acyclic on the window, any
/// extension of M by Y splits, and the splitting is found constructively.
/// The graded projection φ: X -> Y has D(φ) factoring as -θ through X -> M;
/// a primitive ψ' of that factor yields the closed retraction φ - D(ψ'∘p)
/// with (φ - D(ψ'∘p)) ∘ incl = id_Y.
pub fn splitting_certificate(
    m: &CDGModule,
    y: &CDGModule,
    theta: &ModMap,
    lo: Degree,
    hi: Degree,
) -> Result<CheckReport> {
    let mut report = CheckReport::new(&format!("splitting of {} by {}", m.name, y.name));
    let window = Interval::range(lo, hi);

    let h = hom_complex(m, y, lo - 1, hi + 1)?;
    let mut dims = Vec::new();
    for deg in lo..=hi {
        let (dim, _) = complex_cohomology(&h.d, deg)?;
        dims.push((deg, dim));
    }
    let acyclic = dims.iter().all(|&(_, d)| d == 0);
    report.push(
        "H(Hom_A(M, Y)) = 0 in window",
        if acyclic {
            Verdict::Pass
        } else {
            Verdict::Fail {
                witness: dims
                    .iter()
                    .filter(|&&(_, d)| d != 0)
                    .map(|(g, d)| format!("H^{g} has dim {d}"))
                    .collect::<Vec<_>>()
                    .join(", "),
            }
        },
        window,
    );
    if !acyclic {
        report.push(
            "retraction (φ - d(ψ'))∘f = id",
            Verdict::Skipped { reason: "hypothesis not met: Hom complex not acyclic".into() },
            window,
        );
        return Ok(report);
    }

    let ext = extension(y, m, theta)?;
    let sum = direct_sum(y, m)?;
    // graded retraction of the inclusion, A-linear but not closed
    let phi = ModMap::new(&ext.total, y, sum.proj1.map.clone());
    // D(φ) = -θ∘p: solve a primitive for the M -> Y factor
    let psi = theta.map.neg();
    let psi_mod = ModMap::new(m, y, psi);
    let retraction = (|| -> Result<(bool, Interval)> {
        let psi_prime = null_homotopy(&psi_mod)
            .ok_or_else(|| GradedError::Invalid("no primitive despite acyclicity".into()))?;
        let lifted = ModMap::new(&ext.total, y, psi_prime.map.compose(&ext.proj.map)?);
        let r = ModMap::new(&ext.total, y, phi.map.sub(&lifted.differential()?)?);
        let d_r = r.differential()?;
        if !d_r.is_zero_where_known() {
            return Ok((false, window));
        }
        let composite = r.map.compose(&ext.incl.map)?;
        let id_y = GradedMap::identity(&y.space);
        let (eq, w) = composite.equals_where_known(&id_y)?;
        Ok((eq, w))
    })();
    crate::algebra::push_map_identity(&mut report, "retraction (φ - d(ψ'))∘f = id", retraction);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::polynomial_kx;
    use crate::bar::bar;
    use crate::graded::Element;
    use crate::hom::closed_maps;
    use crate::module::{
        augmentation_map, cone, connection_from_elements, cylinder, regular_module,
        twisted_module,
    };
    use crate::scalar::Field;

    fn q() -> Field {
        Field::Rationals
    }

    fn kx_and_ax(window: Degree) -> (CDGAlgebra, CDGModule) {
        let a = polynomial_kx(q(), window);
        let v = GradedSpace::line(q(), "v", 0);
        let alpha = Element::basis(&a.space, 1, 0).unwrap().scale(&-q().one());
        let conn = connection_from_elements(&a, &v, &[(0, 0, alpha)]).unwrap();
        let ax = twisted_module(&a, &v, &conn, "A^x").unwrap();
        (a, ax)
    }

    #[test]
    fn identity_is_a_weak_equivalence_both_ways() {
        let (a, ax) = kx_and_ax(10);
        let reg = regular_module(&a).unwrap();
        let fam = TestFamily::projective(vec![reg.clone(), ax.clone()], "declared {A, A^x}");
        assert!(fam.check().passed());
        let id = ModMap::identity(&reg);
        let rep = we_projective(&id, &fam, 0, 3).unwrap();
        assert!(rep.is_weak_equivalence());

        let b = bar(&a, 2).unwrap();
        let line = GradedSpace::line(q(), "w", 0);
        let dz = GradedMap::zero(line.clone(), line.clone(), 1);
        let inj = injective_family_cofree(&b, &[(line, dz)]).unwrap();
        assert!(inj.check().passed());
        let rep = we_injective(&id, &inj, 0, 2).unwrap();
        assert!(rep.is_weak_equivalence());
    }

    #[test]
    fn augmentation_of_kx_is_rejected_with_witness_ax() {
        // the quasi-isomorphism A -> k is not a GL weak equivalence: A^x
        // detects it (Hom(A^x, A) is acyclic, Hom(A^x, k) is not)
        let (a, ax) = kx_and_ax(12);
        let reg = regular_module(&a).unwrap();
        let fam = TestFamily::projective(vec![reg.clone(), ax.clone()], "declared {A, A^x}");
        let aug = augmentation_map(&a).unwrap();
        let rep = we_projective(&aug, &fam, 0, 3).unwrap();
        assert!(!rep.is_weak_equivalence());
        let wits = rep.witnesses();
        assert_eq!(wits.len(), 1);
        assert_eq!(wits[0].member, "A^x");
        // and the regular member alone would accept: family-relativity
        let small = TestFamily::projective(vec![reg], "declared {A}");
        assert!(we_projective(&aug, &small, 0, 3).unwrap().is_weak_equivalence());
    }

    #[test]
    fn augmentation_rejected_by_injective_oracle_too() {
        // cofree cogenerators cannot see the difference (pre-composition
        // with a quasi-isomorphism stays one); the enumerated 1-dimensional
        // contramodules contain the mirror of the A^x detector
        let (a, ax) = kx_and_ax(8);
        let b = bar(&a, 2).unwrap();
        let coeffs = [q().from_i64(0), q().one(), -q().one()];
        let inj = injective_family_enumerated(&b, &[0], &coeffs).unwrap();
        assert!(inj.members.len() > 1, "expected a nontrivial contramodule");
        assert!(inj.check().passed());
        let aug = augmentation_map(&a).unwrap();
        let rep = we_injective(&aug, &inj, -4, 2).unwrap();
        assert!(!rep.is_weak_equivalence(), "{}", rep.render());
        let reg = regular_module(&a).unwrap();
        let agr = we_agreement(
            &aug,
            &TestFamily::projective(vec![reg, ax], "declared"),
            &inj,
            -4,
            2,
        )
        .unwrap();
        assert!(agr.agree());
    }

    #[test]
    fn cylinder_projection_is_a_weak_equivalence() {
        let (a, ax) = kx_and_ax(8);
        let reg = regular_module(&a).unwrap();
        let cyl = cylinder(&ax).unwrap();
        let fam = TestFamily::projective(vec![reg, ax.clone()], "declared {A, A^x}");
        let rep = we_projective(&cyl.p, &fam, 0, 2).unwrap();
        assert!(rep.is_weak_equivalence(), "{}", rep.render());
    }

    #[test]
    fn splitting_certificate_for_cone_of_identity() {
        let (a, ax) = kx_and_ax(10);
        let m = cone(&ModMap::identity(&ax)).unwrap();
        let y = regular_module(&a).unwrap();
        let thetas = closed_maps(&m, &y, 1);
        let theta = thetas
            .into_iter()
            .next()
            .unwrap_or_else(|| ModMap::zero(&m, &y, 1));
        let report = splitting_certificate(&m, &y, &theta, 0, 3).unwrap();
        assert!(report.passed(), "{:?}", report.failures());
    }

    #[test]
    fn splitting_certificate_guard_reports_unmet_hypothesis() {
        // Hom(A, A) has cohomology: the acyclicity hypothesis fails and the
        // retraction item is skipped, not attempted
        let (a, _) = kx_and_ax(10);
        let reg = regular_module(&a).unwrap();
        let theta = ModMap::zero(&reg, &reg, 1);
        let report = splitting_certificate(&reg, &reg, &theta, 0, 3).unwrap();
        assert!(!report.passed());
        assert!(report
            .items
            .iter()
            .any(|i| matches!(i.verdict, Verdict::Skipped { .. })));
    }

    #[test]
    fn homotopy_equivalence_accepted_by_both_oracles() {
        // cone(id) -> 0 is a homotopy equivalence; both oracles accept
        let (a, ax) = kx_and_ax(8);
        let reg = regular_module(&a).unwrap();
        let c = cone(&ModMap::identity(&ax)).unwrap();
        let zero = {
            let z = GradedSpace::zero(q());
            let d = GradedMap::zero(z.clone(), z.clone(), 1);
            crate::module::trivial_module(&a, z, d)
        };
        let f = ModMap::new(&c, &zero, GradedMap::zero(c.space.clone(), zero.space.clone(), 0));
        let fam = TestFamily::projective(vec![reg, ax.clone()], "declared {A, A^x}");
        let rep = we_projective(&f, &fam, 0, 2).unwrap();
        assert!(rep.is_weak_equivalence(), "{}", rep.render());
        let b = bar(&a, 2).unwrap();
        let line = GradedSpace::line(q(), "w", 0);
        let dz = GradedMap::zero(line.clone(), line.clone(), 1);
        let inj = injective_family_cofree(&b, &[(line, dz)]).unwrap();
        let rep = we_injective(&f, &inj, 0, 2).unwrap();
        assert!(rep.is_weak_equivalence(), "{}", rep.render());
    }
}
