//! Temperley-Lieb diagram monoid on a strip at loop weight 1.
//!
//! A diagram pairs the 2L endpoints of a strip (L on the top edge, L on the
//! bottom edge) into a planar perfect matching. Composition stacks diagrams,
//! traces connectivity through the glued interface and removes the closed
//! loops that form there; at loop weight 1 the removed loops carry no factor
//! but their number is still reported.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default ceiling for full basis enumeration (the basis has Catalan-number
/// size, so this keeps the closure comfortably small).
pub const DEFAULT_ENUM_BOUND: usize = 8;

/// Planar pairing of the 2L boundary points of a strip.
///
/// Endpoints are indexed 0..L-1 for top_1..top_L and L..2L-1 for
/// bot_1..bot_L; `partner[p]` is the endpoint matched with `p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TLDiagram {
    l: usize,
    partner: Vec<u32>,
}

/// A word in the generators e_1..e_{L-1}; the empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLWord {
    pub l: usize,
    pub letters: Vec<usize>,
}

impl TLWord {
    pub fn new(l: usize, letters: Vec<usize>) -> Result<Self> {
        for &i in &letters {
            if i < 1 || i >= l {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    l,
                    bc: "strip".into(),
                });
            }
        }
        Ok(TLWord { l, letters })
    }
}

impl TLDiagram {
    /// Identity diagram: top_i paired with bot_i.
    pub fn identity(l: usize) -> Self {
        assert!(l >= 1);
        let partner = (0..2 * l as u32)
            .map(|p| if p < l as u32 { p + l as u32 } else { p - l as u32 })
            .collect();
        TLDiagram { l, partner }
    }

    /// Monoid diagram of e_i: pairs top_i-top_{i+1}, bot_i-bot_{i+1} and
    /// top_j-bot_j elsewhere. Indices are 1-based, 1 <= i <= L-1.
    pub fn generator(i: usize, l: usize) -> Result<Self> {
        if i < 1 || i >= l {
            return Err(Error::IndexOutOfRange {
                index: i,
                l,
                bc: "strip".into(),
            });
        }
        let mut d = TLDiagram::identity(l);
        let (a, b) = (i - 1, i); // 0-based top endpoints
        d.partner[a] = b as u32;
        d.partner[b] = a as u32;
        d.partner[l + a] = (l + b) as u32;
        d.partner[l + b] = (l + a) as u32;
        Ok(d)
    }

    pub fn size(&self) -> usize {
        self.l
    }

    /// Partner of an endpoint (0..L-1 top, L..2L-1 bottom).
    pub fn partner(&self, p: usize) -> usize {
        self.partner[p] as usize
    }

    /// Position of endpoint `p` on the boundary walk top_1..top_L,
    /// bot_L..bot_1; the pairing is planar iff it is noncrossing in this
    /// circular order.
    fn walk_position(&self, p: usize) -> usize {
        if p < self.l {
            p
        } else {
            2 * self.l - 1 - (p - self.l)
        }
    }

    /// Noncrossing test against the boundary-walk order.
    pub fn is_planar(&self) -> bool {
        let n = 2 * self.l;
        let mut at = vec![0u32; n];
        for p in 0..n {
            at[self.walk_position(p)] = self.partner[p] as u32;
        }
        let mut stack: Vec<usize> = Vec::new();
        for pos in 0..n {
            let partner_pos = self.walk_position(at[pos] as usize);
            if partner_pos > pos {
                stack.push(partner_pos);
            } else if stack.pop() != Some(pos) {
                return false;
            }
        }
        stack.is_empty()
    }

    /// Validates the perfect-matching and planarity invariants.
    pub fn validate(&self) -> bool {
        let n = 2 * self.l;
        (0..n).all(|p| {
            let q = self.partner[p] as usize;
            q < n && q != p && self.partner[q] as usize == p
        }) && self.is_planar()
    }

    /// Stacks `below` under `self` (self on top), traces connectivity through
    /// the interface and returns the composite together with the number of
    /// closed loops removed.
    pub fn compose(&self, below: &TLDiagram) -> Result<(TLDiagram, usize)> {
        if self.l != below.l {
            return Err(Error::SizeMismatch(self.l, below.l));
        }
        let l = self.l;
        // Node space: 0..l: result top (self top); l..2l: interface
        // (self bottom = below top); 2l..3l: result bottom (below bottom).
        // Adjacency through each diagram's pairing.
        let mut partner = vec![0u32; 2 * l];
        let mut seen_interface = vec![false; l];

        // follow from a boundary endpoint through the interface;
        // returns (lands_on_top, index)
        let trace = |start_is_top: bool, idx: usize, seen: &mut Vec<bool>| -> (bool, usize) {
            let (mut in_upper, mut endpoint) = if start_is_top {
                (true, self.partner(idx))
            } else {
                (false, below.partner(l + idx))
            };
            loop {
                if in_upper {
                    if endpoint < l {
                        return (true, endpoint); // top boundary of result
                    }
                    // hit the interface; continue in the lower diagram
                    let k = endpoint - l;
                    seen[k] = true;
                    in_upper = false;
                    endpoint = below.partner(k);
                } else {
                    if endpoint >= l {
                        return (false, endpoint - l); // bottom boundary
                    }
                    // hit the interface; continue in the upper diagram
                    seen[endpoint] = true;
                    in_upper = true;
                    endpoint = self.partner(l + endpoint);
                }
            }
        };

        for t in 0..l {
            let (on_top, j) = trace(true, t, &mut seen_interface);
            partner[t] = if on_top { j as u32 } else { (l + j) as u32 };
        }
        for b in 0..l {
            let (on_top, j) = trace(false, b, &mut seen_interface);
            partner[l + b] = if on_top { j as u32 } else { (l + j) as u32 };
        }

        // loops: interface cycles never touched by a boundary trace
        let mut loops = 0;
        let mut visited = vec![false; l];
        for k in 0..l {
            if seen_interface[k] || visited[k] {
                continue;
            }
            loops += 1;
            let mut cur = k;
            loop {
                visited[cur] = true;
                // step down through `below`, back up through `self`
                let down = below.partner(cur);
                debug_assert!(down < l, "loop component must stay interior");
                visited[down] = true;
                let up = self.partner(l + down);
                debug_assert!(up >= l, "loop component must stay interior");
                cur = up - l;
                if cur == k {
                    break;
                }
            }
        }

        let d = TLDiagram { l, partner };
        debug_assert!(d.validate());
        Ok((d, loops))
    }

    /// Whether this is the identity diagram.
    pub fn is_identity(&self) -> bool {
        *self == TLDiagram::identity(self.l)
    }

    /// Connectivity of the bottom boundary: for bottom point i (0-based),
    /// `Some(j)` if it pairs with bottom point j, `None` if its line runs to
    /// the top edge.
    pub fn bottom_connectivity(&self) -> Vec<Option<usize>> {
        (0..self.l)
            .map(|i| {
                let q = self.partner(self.l + i);
                if q >= self.l {
                    Some(q - self.l)
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Debug for TLDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TLDiagram[{}]({})", self.l, self)
    }
}

impl fmt::Display for TLDiagram {
    /// Pairing list such as "T1-T2,B1-B2,T3-B3", sorted by first endpoint in
    /// the order T1..TL, B1..BL.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |p: usize| {
            if p < self.l {
                format!("T{}", p + 1)
            } else {
                format!("B{}", p - self.l + 1)
            }
        };
        let mut first = true;
        for p in 0..2 * self.l {
            let q = self.partner(p);
            if q > p {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}-{}", name(p), name(q))?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Folds a word into a single diagram. Letters act in word order, each new
/// generator glued below the accumulated diagram, so the bottom edge of the
/// result carries the word's link connectivity. Returns the diagram and the
/// total number of loops removed along the way.
pub fn reduce_word(word: &TLWord) -> Result<(TLDiagram, usize)> {
    let mut acc = TLDiagram::identity(word.l);
    let mut total = 0;
    for &i in &word.letters {
        let gen = TLDiagram::generator(i, word.l)?;
        let (next, loops) = gen.compose(&acc)?;
        acc = next;
        total += loops;
    }
    Ok((acc, total))
}

/// Closure of {identity, e_1..e_{L-1}} under composition (diagram part
/// only), returned in sorted canonical order. The cardinality is the
/// Catalan number C_L.
pub fn enumerate_diagram_basis(l: usize, bound: Option<usize>) -> Result<Vec<TLDiagram>> {
    let bound = bound.unwrap_or(DEFAULT_ENUM_BOUND);
    if l > bound {
        return Err(Error::BoundExceeded(l, bound));
    }
    let mut gens = vec![TLDiagram::identity(l)];
    for i in 1..l {
        gens.push(TLDiagram::generator(i, l)?);
    }
    let mut seen: BTreeSet<TLDiagram> = gens.iter().cloned().collect();
    let mut queue: VecDeque<TLDiagram> = seen.iter().cloned().collect();
    while let Some(d) = queue.pop_front() {
        for g in &gens[1..] {
            for prod in [g.compose(&d)?.0, d.compose(g)?.0] {
                if seen.insert(prod.clone()) {
                    queue.push_back(prod);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::catalan;

    fn e(i: usize, l: usize) -> TLDiagram {
        TLDiagram::generator(i, l).unwrap()
    }

    #[test]
    fn generator_shapes() {
        assert_eq!(e(1, 2).to_string(), "T1-T2,B1-B2");
        assert_eq!(e(2, 4).to_string(), "T1-B1,T2-T3,T4-B4,B2-B3");
        assert!(TLDiagram::generator(0, 4).is_err());
        assert!(TLDiagram::generator(4, 4).is_err());
    }

    #[test]
    fn identity_is_unit() {
        for l in 1..=5 {
            let id = TLDiagram::identity(l);
            for i in 1..l {
                let d = e(i, l);
                assert_eq!(id.compose(&d).unwrap(), (d.clone(), 0));
                assert_eq!(d.compose(&id).unwrap(), (d, 0));
            }
        }
    }

    #[test]
    fn idempotent_with_one_loop() {
        for l in 2..=6 {
            for i in 1..l {
                let g = e(i, l);
                assert_eq!(g.compose(&g).unwrap(), (g.clone(), 1));
            }
        }
    }

    #[test]
    fn sandwich_relation() {
        // e_i e_{i+-1} e_i = e_i with no loops
        for l in 3..=6usize {
            for i in 1..l {
                for j in [i.wrapping_sub(1), i + 1] {
                    if j < 1 || j >= l {
                        continue;
                    }
                    let w = TLWord::new(l, vec![i, j, i]).unwrap();
                    let (d, loops) = reduce_word(&w).unwrap();
                    assert_eq!(d, e(i, l));
                    assert_eq!(loops, 0);
                }
            }
        }
    }

    #[test]
    fn distant_generators_commute() {
        for l in 4..=6 {
            for i in 1..l {
                for j in i + 2..l {
                    let a = reduce_word(&TLWord::new(l, vec![i, j]).unwrap()).unwrap();
                    let b = reduce_word(&TLWord::new(l, vec![j, i]).unwrap()).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn size_mismatch_rejected() {
        assert_eq!(
            e(1, 3).compose(&e(1, 4)).unwrap_err(),
            Error::SizeMismatch(3, 4)
        );
    }

    #[test]
    fn empty_word_is_identity() {
        let w = TLWord::new(4, vec![]).unwrap();
        assert_eq!(reduce_word(&w).unwrap(), (TLDiagram::identity(4), 0));
    }

    #[test]
    fn squared_letter_gives_loop() {
        let w = TLWord::new(3, vec![1, 1]).unwrap();
        assert_eq!(reduce_word(&w).unwrap(), (e(1, 3), 1));
    }

    #[test]
    fn three_letter_word_bottom_pattern() {
        // brute-force composite of e_2, e_1, e_3 at L=6: the bottom edge
        // carries the nested pattern (1,4),(2,3) with lines at 5, 6
        let w = TLWord::new(6, vec![2, 1, 3]).unwrap();
        let (d, loops) = reduce_word(&w).unwrap();
        assert_eq!(loops, 0);
        let bottom = d.bottom_connectivity();
        assert_eq!(
            bottom,
            vec![Some(3), Some(2), Some(1), Some(0), None, None]
        );
        assert_eq!(d.to_string(), "T1-T2,T3-T4,T5-B5,T6-B6,B1-B4,B2-B3");
    }

    #[test]
    fn basis_sizes_are_catalan() {
        for l in 1..=8 {
            let basis = enumerate_diagram_basis(l, None).unwrap();
            assert_eq!(
                num_bigint::BigUint::from(basis.len()),
                catalan(l as u64),
                "L={l}"
            );
            for d in &basis {
                assert!(d.validate());
            }
        }
        assert!(enumerate_diagram_basis(9, None).is_err());
        assert!(enumerate_diagram_basis(9, Some(9)).is_ok());
    }

    #[test]
    fn associativity_exhaustive_small() {
        for l in 2..=4 {
            let basis = enumerate_diagram_basis(l, None).unwrap();
            for a in &basis {
                for b in &basis {
                    let ab = a.compose(b).unwrap().0;
                    for c in &basis {
                        let bc = b.compose(c).unwrap().0;
                        assert_eq!(ab.compose(c).unwrap().0, a.compose(&bc).unwrap().0);
                    }
                }
            }
        }
    }

    #[test]
    fn planarity_detects_crossing() {
        let mut d = TLDiagram::identity(2);
        // cross the strands: top1-bot2, top2-bot1
        d.partner = vec![3, 2, 1, 0];
        assert!(!d.is_planar());
    }
}
