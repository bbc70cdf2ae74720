//! Word-length-truncated extended bar construction B̌A and the canonical
//! twisting cochain τ.
//!
//! The carrier is ⊕_{n=0}^{N} (Ā[1])^{⊗n} with deconcatenation
//! comultiplication. The differential merges adjacent letters through the
//! reduced multiplication, applies d_A letterwise, and (when h_A ≠ 0)
//! inserts the curvature letter, raising word length. The curvature
//! functional collects the unit components dropped by the reduction.

use crate::algebra::{push_map_identity, CDGAlgebra};
use crate::coalgebra::CDGCoalgebra;
use crate::graded::{
    tensor_index_map, tensor_map, unit_line, Degree, Ext, GradedError, GradedMap, GradedSpace,
    Interval, Result,
};
use crate::report::CheckReport;
use crate::scalar::Scalar;
use std::collections::HashMap;

/// A letter is a basis vector of the reduced algebra Ā; a word is a list of
/// letters. The bar degree of a letter of algebra degree g is g - 1.
pub type Word = Vec<(Degree, usize)>;

pub struct TruncatedBar {
    pub algebra: CDGAlgebra,
    pub truncation: usize,
    pub coalgebra: CDGCoalgebra,
    /// Reduced algebra Ā with the projection A -> Ā and inclusion Ā -> A.
    pub abar: GradedSpace,
    pub proj: GradedMap,
    pub incl: GradedMap,
    /// Words per bar degree, parallel to the carrier basis.
    pub words: HashMap<Degree, Vec<Word>>,
    index: HashMap<Word, (Degree, usize)>,
    /// Word lengths per bar degree, parallel to the carrier basis.
    pub lengths: HashMap<Degree, Vec<usize>>,
}

fn word_degree(w: &Word) -> Degree {
    w.iter().map(|&(g, _)| g - 1).sum()
}

fn word_label(abar: &GradedSpace, w: &Word) -> String {
    let letters: Vec<String> = w
        .iter()
        .map(|&(g, i)| abar.labels(g).unwrap()[i].clone())
        .collect();
    format!("[{}]", letters.join("|"))
}

/// Known interval of the truncated carrier. A missing letter of the base
/// algebra beyond its window could contribute to any bar degree at or past
/// the window edge shifted by one.
fn bar_known(a: &GradedSpace) -> Interval {
    let lo = match a.known.lo {
        Ext::NegInf => Ext::NegInf,
        Ext::Fin(l) => Ext::Fin(l - 1),
        Ext::PosInf => Ext::PosInf,
    };
    let hi = match a.known.hi {
        Ext::PosInf => Ext::PosInf,
        Ext::Fin(h) => Ext::Fin(h - 1),
        Ext::NegInf => Ext::NegInf,
    };
    Interval { lo, hi }
}

pub fn bar(a: &CDGAlgebra, truncation: usize) -> Result<TruncatedBar> {
    let field = a.field();
    let (abar, proj, incl) = a.reduced();
    let letters: Vec<(Degree, usize)> = abar
        .support()
        .into_iter()
        .flat_map(|g| (0..abar.dim(g).unwrap()).map(move |i| (g, i)))
        .collect();

    let mut space = GradedSpace::new(field, bar_known(&a.space));
    let mut words: HashMap<Degree, Vec<Word>> = HashMap::new();
    let mut lengths: HashMap<Degree, Vec<usize>> = HashMap::new();
    let mut index: HashMap<Word, (Degree, usize)> = HashMap::new();
    let mut current: Vec<Word> = vec![vec![]];
    for len in 0..=truncation {
        // words outside the known window are dropped: they are unknown by
        // definition, and identities touching them are out of window
        current.retain(|w| space.known.contains(word_degree(w)));
        for w in &current {
            let g = word_degree(w);
            space.push_basis(g, &word_label(&abar, w));
            let slot = words.entry(g).or_default();
            index.insert(w.clone(), (g, slot.len()));
            slot.push(w.clone());
            lengths.entry(g).or_default().push(len);
        }
        if len < truncation {
            current = current
                .iter()
                .flat_map(|w| {
                    letters.iter().map(move |&l| {
                        let mut next = w.clone();
                        next.push(l);
                        next
                    })
                })
                .collect();
        }
    }

    // comultiplication: deconcatenation, sign-free
    let t2 = crate::graded::tensor_space(&space, &space)?;
    let mut comul = GradedMap::zero(space.clone(), t2.clone(), 0);
    for g in space.support() {
        if !comul.known.contains(g) {
            continue;
        }
        let idx = tensor_index_map(&space, &space, g);
        for (col, w) in words[&g].iter().enumerate() {
            for cut in 0..=w.len() {
                let (p, s) = (w[..cut].to_vec(), w[cut..].to_vec());
                if let (Some(&(gp, ip)), Some(&(gs, is))) = (index.get(&p), index.get(&s)) {
                    comul.add_entry(g, idx[&(gp, ip, gs, is)], col, field.one());
                }
            }
        }
    }

    // counit: projection onto the empty word
    let k_line = unit_line(field);
    let mut counit = GradedMap::zero(space.clone(), k_line.clone(), 0);
    let (eg, ei) = index[&Vec::new()];
    counit.set_entry(eg, 0, ei, field.one());

    // reduced differential and curvature letter
    let d_red = proj.compose(&a.d)?.compose(&incl)?;
    let nu_d = a.d.compose(&incl)?; // Ā -> A, unit row gives ν(d a)
    let hbar: Vec<(Degree, usize, Scalar)> = {
        let mut v = Vec::new();
        if !a.h.coords.is_zero() {
            let ph = proj.block(a.h.degree)?.matmul(&a.h.coords);
            for r in 0..ph.rows {
                let c = ph.get(r, 0);
                if !c.is_zero() {
                    v.push((a.h.degree, r, c));
                }
            }
        }
        v
    };

    // A-coordinate row of a letter: the single nonzero of its inclusion
    let letter_row = |(g, i): (Degree, usize)| -> Result<usize> {
        let b = incl.block(g)?;
        (0..b.rows)
            .find(|&r| !b.get(r, i).is_zero())
            .ok_or_else(|| GradedError::Invalid("empty letter".into()))
    };

    // reduced product of two letters, with the unit coefficient
    let letter_mul = |la: (Degree, usize), lb: (Degree, usize)| -> Result<(Vec<(Degree, usize, Scalar)>, Scalar)> {
        let (ga, _) = la;
        let (gb, _) = lb;
        let midx = tensor_index_map(&a.space, &a.space, ga + gb);
        let prod = a
            .mul
            .block(ga + gb)?
            .column(midx[&(ga, letter_row(la)?, gb, letter_row(lb)?)]);
        let nu = if ga + gb == 0 { prod.get(a.unit_index, 0) } else { field.zero() };
        let red = proj.block(ga + gb)?.matmul(&prod);
        let mut terms = Vec::new();
        for r in 0..red.rows {
            let c = red.get(r, 0);
            if !c.is_zero() {
                terms.push((ga + gb, r, c));
            }
        }
        Ok((terms, nu))
    };

    // differential d = b2 + b1 + b0 and curvature functional h
    let mut d = GradedMap::zero(space.clone(), space.clone(), 1);
    let mut h = GradedMap::zero(space.clone(), k_line, 2);
    for g in space.support() {
        if !d.known.contains(g) {
            continue;
        }
        for (col, w) in words[&g].iter().enumerate() {
            let mut emit = |w2: Word, c: Scalar| {
                if let Some(&(_, i2)) = index.get(&w2) {
                    d.add_entry(g, i2, col, c);
                }
            };
            let mut prefix_odd = false;
            for j in 0..=w.len() {
                let pref = |flag: bool, v: Scalar| if flag { -v } else { v };
                // b0: insert the curvature letter at position j
                if w.len() < truncation {
                    for &(gh, ih, ref c) in &hbar {
                        let mut w2 = w.clone();
                        w2.insert(j, (gh, ih));
                        emit(w2, pref(prefix_odd, -c.clone()));
                    }
                }
                if j == w.len() {
                    break;
                }
                let (ga, ia) = w[j];
                // b1: apply -π d_A to letter j; the unit coefficient of
                // d_A feeds the curvature functional on words of length 1
                let db = d_red.block(ga)?;
                for r in 0..db.rows {
                    let c = db.get(r, ia);
                    if !c.is_zero() {
                        let mut w2 = w.clone();
                        w2[j] = (ga + 1, r);
                        emit(w2, pref(prefix_odd, -c));
                    }
                }
                if w.len() == 1 && ga == -1 {
                    let nu = nu_d.block(ga)?.get(a.unit_index, ia);
                    if !nu.is_zero() {
                        h.add_entry(g, 0, col, nu);
                    }
                }
                // b2: merge letters j, j+1 through (-1)^{|a|} π(ab); the
                // unit coefficient feeds the curvature functional on pairs
                // with the opposite sign (both pinned by the Maurer-Cartan
                // equation for τ)
                if j + 1 < w.len() {
                    let (terms, nu) = letter_mul(w[j], w[j + 1])?;
                    let merge_odd = ga.rem_euclid(2) == 1; // (-1)^{|a|}
                    for (gm, im, c) in terms {
                        let mut w2 = w.clone();
                        w2.remove(j + 1);
                        w2[j] = (gm, im);
                        emit(w2, pref(prefix_odd != merge_odd, c));
                    }
                    if w.len() == 2 && !nu.is_zero() {
                        h.add_entry(g, 0, col, pref(!merge_odd, nu));
                    }
                }
                prefix_odd ^= (ga - 1).rem_euclid(2) == 1;
            }
        }
    }

    let coalgebra = CDGCoalgebra {
        name: format!("B{}({})", truncation, a.name),
        space,
        comul,
        counit,
        d,
        h,
    };
    Ok(TruncatedBar {
        algebra: a.clone(),
        truncation,
        coalgebra,
        abar,
        proj,
        incl,
        words,
        index,
        lengths,
    })
}

impl TruncatedBar {
    /// Inclusion of the span of words of length <= cap into the carrier.
    pub fn length_incl(&self, cap: usize) -> GradedMap {
        let field = self.algebra.field();
        let mut sub = GradedSpace::new(field, self.coalgebra.space.known);
        let mut entries = Vec::new();
        for g in self.coalgebra.space.support() {
            let labels = self.coalgebra.space.labels(g).unwrap();
            for (i, len) in self.lengths[&g].iter().enumerate() {
                if *len <= cap {
                    entries.push((g, sub.dim(g).unwrap_or(0), i));
                    sub.push_basis(g, &labels[i]);
                }
            }
        }
        let mut incl = GradedMap::zero(sub, self.coalgebra.space.clone(), 0);
        for (g, row_in_sub, i) in entries {
            incl.set_entry(g, i, row_in_sub, field.one());
        }
        incl
    }

    /// Index of a word in the carrier.
    pub fn word_index(&self, w: &Word) -> Option<(Degree, usize)> {
        self.index.get(w).copied()
    }
}

/// The canonical twisting cochain τ: B̌A -> A, projection onto words of
/// length one followed by the inverse shift.
pub fn tau(b: &TruncatedBar) -> GradedMap {
    let mut out = GradedMap::zero(b.coalgebra.space.clone(), b.algebra.space.clone(), 1);
    for g in b.coalgebra.space.support() {
        for (i, w) in b.words[&g].iter().enumerate() {
            if w.len() != 1 {
                continue;
            }
            let (ga, ia) = w[0];
            let col = b.incl.block(ga).unwrap();
            for r in 0..col.rows {
                let v = col.get(r, ia);
                if !v.is_zero() {
                    out.add_entry(g, r, i, v);
                }
            }
        }
    }
    out
}

/// Axiom check for the truncated bar. When h_A = 0 the truncation is closed
/// under the differential and the full CDG-coalgebra check applies. When
/// h_A != 0 the curvature insertion raises word length, so the identities
/// involving d are checked on the span of words of length <= N - 1, where
/// no term is lost to the truncation.
pub fn check_bar(b: &TruncatedBar) -> CheckReport {
    if b.algebra.h.is_zero() {
        return crate::coalgebra::check_cdg_coalgebra(&b.coalgebra);
    }
    let c = &b.coalgebra;
    let mut report = CheckReport::new(&c.name);
    let id = GradedMap::identity(&c.space);
    let incl = b.length_incl(b.truncation.saturating_sub(1));

    let counit_l = (|| {
        let lu = crate::graded::left_unitor(&c.space)?;
        let lhs = lu.compose(&tensor_map(&c.counit, &id)?)?.compose(&c.comul)?;
        lhs.equals_where_known(&id)
    })();
    push_map_identity(&mut report, "counit (left)", counit_l);
    let counit_r = (|| {
        let ru = crate::graded::right_unitor(&c.space)?;
        let lhs = ru.compose(&tensor_map(&id, &c.counit)?)?.compose(&c.comul)?;
        lhs.equals_where_known(&id)
    })();
    push_map_identity(&mut report, "counit (right)", counit_r);
    let coassoc = (|| {
        let assoc = crate::graded::associator(&c.space, &c.space, &c.space)?;
        let lhs = tensor_map(&c.comul, &id)?.compose(&c.comul)?;
        let rhs = assoc.compose(&tensor_map(&id, &c.comul)?.compose(&c.comul)?)?;
        lhs.equals_where_known(&rhs)
    })();
    push_map_identity(&mut report, "coassociativity", coassoc);

    let co_leibniz = (|| {
        let lhs = c.comul.compose(&c.d)?.compose(&incl)?;
        let rhs = tensor_map(&c.d, &id)?
            .add(&tensor_map(&id, &c.d)?)?
            .compose(&c.comul)?
            .compose(&incl)?;
        lhs.equals_where_known(&rhs)
    })();
    push_map_identity(&mut report, "co-Leibniz (words < N)", co_leibniz);

    let d_sq = (|| {
        let lhs = c.d.compose(&c.d)?.compose(&incl)?;
        let rhs = c
            .left_curvature_action()?
            .sub(&c.right_curvature_action()?)?
            .compose(&incl)?;
        lhs.equals_where_known(&rhs)
    })();
    push_map_identity(&mut report, "d^2 = h -| - |- h (words < N)", d_sq);

    let h_d: Result<(bool, Interval)> = (|| {
        let lhs = c.h.compose(&c.d)?.compose(&incl)?;
        Ok((lhs.is_zero_where_known(), lhs.known))
    })();
    push_map_identity(&mut report, "h ∘ d = 0 (words < N)", h_d);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{exterior, polynomial_kx, truncated_polynomial, AlgebraSpec};
    use crate::scalar::Field;

    /// Two-sided fixture with letters in bar degrees -1 and -2 so the bar
    /// curvature functional is nonzero: t in degree 0 with t^2 = 1,
    /// u in degree -1 with tu = ut = -u, u^2 = 0, d(u) = 1 - t.
    fn mixed_fixture() -> CDGAlgebra {
        let q = Field::Rationals;
        AlgebraSpec {
            name: "k[t,u]".into(),
            basis: vec![("1".into(), 0), ("t".into(), 0), ("u".into(), -1)],
            unit: "1".into(),
            products: vec![
                ("t".into(), "t".into(), vec![("1".into(), q.one())]),
                ("t".into(), "u".into(), vec![("u".into(), -q.one())]),
                ("u".into(), "t".into(), vec![("u".into(), -q.one())]),
            ],
            differentials: vec![(
                "u".into(),
                vec![("1".into(), q.one()), ("t".into(), -q.one())],
            )],
            curvature: vec![],
            window: None,
        }
        .build(q)
        .unwrap()
    }

    #[test]
    fn bar_of_square_zero_is_a_cdg_coalgebra() {
        for n in [1usize, 2, 3, 4] {
            let a = exterior(Field::Rationals, 2);
            let b = bar(&a, n).unwrap();
            let rep = check_bar(&b);
            assert!(rep.passed(), "N={n}: {rep}");
            // one word (s eps)^l per length
            let total: usize = b
                .coalgebra
                .space
                .support()
                .iter()
                .map(|&g| b.coalgebra.space.dim(g).unwrap())
                .sum();
            assert_eq!(total, n + 1);
        }
    }

    #[test]
    fn bar_of_truncated_polynomial_passes() {
        let a = truncated_polynomial(Field::Prime(5), 2, 3);
        let b = bar(&a, 3).unwrap();
        let rep = check_bar(&b);
        assert!(rep.passed(), "{rep}");
        assert!(b.coalgebra.h.is_zero_where_known());
    }

    #[test]
    fn mixed_fixture_bar_has_nonzero_curvature_functional() {
        let a = mixed_fixture();
        assert!(crate::algebra::check_cdg_algebra(&a).passed());
        let b = bar(&a, 3).unwrap();
        // h_B([u]) = ν(d u) = 1, h_B([t|t]) = -(-1)^{|t|} ν(t^2) = -1
        let (g, i) = b.word_index(&vec![(-1, 0)]).unwrap();
        assert_eq!(g, -2);
        let m1 = -Field::Rationals.one();
        assert_eq!(b.coalgebra.h.block(g).unwrap().get(0, i), Field::Rationals.one());
        let (g2, i2) = b.word_index(&vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(g2, -2);
        assert_eq!(b.coalgebra.h.block(g2).unwrap().get(0, i2), m1);
        let rep = check_bar(&b);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn curved_bar_passes_in_window() {
        let q = Field::Rationals;
        let a = AlgebraSpec {
            name: "square-zero curved".into(),
            basis: vec![("1".into(), 0), ("u".into(), 1), ("w".into(), 2)],
            unit: "1".into(),
            products: vec![],
            differentials: vec![("u".into(), vec![("w".into(), q.one())])],
            curvature: vec![("w".into(), q.one())],
            window: None,
        }
        .build(q)
        .unwrap();
        for n in [2usize, 3] {
            let b = bar(&a, n).unwrap();
            let rep = check_bar(&b);
            assert!(rep.passed(), "N={n}: {rep}");
        }
    }

    #[test]
    fn windowed_base_algebra_gives_windowed_bar() {
        let a = polynomial_kx(Field::Rationals, 4);
        let b = bar(&a, 3).unwrap();
        assert_eq!(b.coalgebra.space.known, Interval { lo: Ext::NegInf, hi: Ext::Fin(3) });
        let rep = check_bar(&b);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn tau_is_the_length_one_projection() {
        let a = exterior(Field::Rationals, 2);
        let b = bar(&a, 3).unwrap();
        let t = tau(&b);
        let (g, i) = b.word_index(&vec![(2, 0)]).unwrap();
        assert_eq!(g, 1);
        assert_eq!(t.block(g).unwrap().get(0, i), Field::Rationals.one());
        // zero on the empty word and on longer words
        let (g0, i0) = b.word_index(&Vec::new()).unwrap();
        if let Ok(bl) = t.block(g0) {
            for r in 0..bl.rows {
                assert!(bl.get(r, i0).is_zero());
            }
        }
    }
}
