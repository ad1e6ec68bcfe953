//! Broken-profile dynamic program for fully packed loop tallies.
//!
//! Cells are processed in row-major order. The frontier carries w vertical
//! plugs plus one broken horizontal plug; each plug is empty, one end of an
//! open strand pair, or a strand tied to a terminal. Completed
//! terminal-terminal connections accumulate in the key, so the final map is
//! exactly the tally by boundary matching.
//!
//! The half-turn-symmetric preset is handled by the fundamental-domain
//! search instead (the symmetry is a global constraint that a frontier
//! cannot carry); both engines still traverse different search structures
//! and are cross-checked.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fpl::{
    enumerate_fpl_symmetric, matching_to_state, sub_specs, ConnectivityTally, GridSpec, Reading,
    Stub, StubState,
};

const EMPTY: u16 = 0;
const TERM_BASE: u16 = 512;

fn is_term(tok: u16) -> bool {
    tok >= TERM_BASE
}

fn term(t: u16) -> u16 {
    TERM_BASE + t
}

type Key = (Vec<u16>, Vec<(u16, u16)>);

/// What a boundary port admits.
#[derive(Clone, Copy)]
enum PortKind {
    Plug,
    Terminal(u16),
    Closed,
}

fn stub_port(spec: &GridSpec, stub: Stub) -> PortKind {
    match spec.stub_state(stub) {
        StubState::Site(t) | StubState::Free(t) => PortKind::Terminal(t),
        StubState::Vacant => PortKind::Closed,
    }
}

pub fn enumerate_fpl_dp(spec: &GridSpec) -> Result<ConnectivityTally> {
    if spec.reading == Reading::HalfTurnFold {
        return enumerate_fpl_symmetric(spec);
    }
    let mut tally = ConnectivityTally::default();
    for sub in sub_specs(spec) {
        dp_run(&sub, &mut tally)?;
    }
    Ok(tally)
}

fn dp_run(spec: &GridSpec, tally: &mut ConnectivityTally) -> Result<()> {
    let (w, h) = (spec.width, spec.height);
    let blank = vec![EMPTY; w + 1];

    // initial frontier: the top stubs, branching on free ones
    let mut cur: BTreeMap<Key, BigUint> = BTreeMap::new();
    let mut seeds: Vec<Vec<u16>> = vec![blank.clone()];
    for c in 0..w {
        match spec.stub_state(Stub::Top(c)) {
            StubState::Site(t) => {
                for s in &mut seeds {
                    s[c] = term(t);
                }
            }
            StubState::Vacant => {}
            StubState::Free(t) => {
                let mirror = w - 1 - c;
                if spec.paired_tops && mirror < c {
                    continue; // handled together with its mirror below
                }
                let mut extra = Vec::new();
                for s in &seeds {
                    let mut on = s.clone();
                    on[c] = term(t);
                    if spec.paired_tops && mirror != c {
                        let StubState::Free(tm) = spec.stub_state(Stub::Top(mirror)) else {
                            unreachable!("mirror of a free top stub must be free");
                        };
                        on[mirror] = term(tm);
                    }
                    extra.push(on);
                }
                seeds.extend(extra);
            }
        }
    }
    for s in seeds {
        *cur.entry((s, Vec::new())).or_insert_with(BigUint::zero) += 1u32;
    }

    for r in 0..h {
        for c in 0..w {
            let south = if r + 1 < h {
                PortKind::Plug
            } else {
                stub_port(spec, Stub::Bottom(c))
            };
            let east = if c + 1 < w {
                PortKind::Plug
            } else {
                stub_port(spec, Stub::Right(r))
            };
            let west_stub = if c == 0 {
                Some(stub_port(spec, Stub::Left(r)))
            } else {
                None
            };
            let mut next: BTreeMap<Key, BigUint> = BTreeMap::new();
            for ((tokens, done), count) in &cur {
                let north = tokens[c];
                let west = match west_stub {
                    Some(PortKind::Terminal(t)) => term(t),
                    Some(_) => EMPTY,
                    None => tokens[w],
                };
                step_cell(
                    spec, tokens, done, count, c, north, west, south, east, &mut next,
                )?;
            }
            cur = next;
        }
    }

    for ((tokens, done), count) in cur {
        debug_assert!(tokens.iter().all(|&t| t == EMPTY));
        let state = matching_to_state(spec, &done)?;
        tally.add_counted(state, count);
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn step_cell(
    spec: &GridSpec,
    tokens: &[u16],
    done: &[(u16, u16)],
    count: &BigUint,
    c: usize,
    north: u16,
    west: u16,
    south: PortKind,
    east: PortKind,
    next: &mut BTreeMap<Key, BigUint>,
) -> Result<()> {
    let w = spec.width;
    let in_occ = (north != EMPTY) as u8 + (west != EMPTY) as u8;

    let south_choices: &[bool] = match south {
        PortKind::Plug => &[false, true],
        PortKind::Terminal(_) => &[true],
        PortKind::Closed => &[false],
    };
    let east_choices: &[bool] = match east {
        PortKind::Plug => &[false, true],
        PortKind::Terminal(_) => &[true],
        PortKind::Closed => &[false],
    };

    for &s_occ in south_choices {
        for &e_occ in east_choices {
            if in_occ + s_occ as u8 + e_occ as u8 != 2 {
                continue;
            }
            let mut toks = tokens.to_vec();
            let mut fin = done.to_vec();
            // the consumed plugs reset; refills happen below
            toks[c] = EMPTY;
            if c > 0 {
                toks[w] = EMPTY;
            }
            let ok = match (north != EMPTY, west != EMPTY) {
                (true, true) => join(&mut toks, &mut fin, north, west),
                (true, false) => route(spec, &mut toks, &mut fin, north, c, s_occ, south, east),
                (false, true) => route(spec, &mut toks, &mut fin, west, c, s_occ, south, east),
                (false, false) => open_pair(&mut toks, &mut fin, c, south, east),
            };
            if !ok {
                continue;
            }
            canonicalize(&mut toks);
            fin.sort_unstable();
            *next
                .entry((toks, fin))
                .or_insert_with(BigUint::zero) += count;
        }
    }
    Ok(())
}

/// North and west strands merge in this cell.
fn join(toks: &mut [u16], fin: &mut Vec<(u16, u16)>, a: u16, b: u16) -> bool {
    match (is_term(a), is_term(b)) {
        (true, true) => {
            let (x, y) = (a - TERM_BASE, b - TERM_BASE);
            fin.push((x.min(y), x.max(y)));
            true
        }
        (true, false) => {
            relabel(toks, b, a);
            true
        }
        (false, true) => {
            relabel(toks, a, b);
            true
        }
        (false, false) => {
            if a == b {
                true // closed internal loop
            } else {
                relabel(toks, b, a);
                true
            }
        }
    }
}

/// A single strand continues south or east.
fn route(
    spec: &GridSpec,
    toks: &mut [u16],
    fin: &mut Vec<(u16, u16)>,
    strand: u16,
    c: usize,
    s_occ: bool,
    south: PortKind,
    east: PortKind,
) -> bool {
    let w = spec.width;
    let (port, slot) = if s_occ { (south, c) } else { (east, w) };
    match port {
        PortKind::Plug => {
            toks[slot] = strand;
            true
        }
        PortKind::Terminal(t) => {
            if is_term(strand) {
                let (x, y) = (strand - TERM_BASE, t);
                fin.push((x.min(y), x.max(y)));
            } else {
                relabel(toks, strand, term(t));
            }
            true
        }
        PortKind::Closed => false,
    }
}

/// Fresh strand pair born in this cell, its two ends leaving south and east.
fn open_pair(toks: &mut [u16], fin: &mut Vec<(u16, u16)>, c: usize, south: PortKind, east: PortKind) -> bool {
    let w = toks.len() - 1;
    match (south, east) {
        (PortKind::Plug, PortKind::Plug) => {
            let id = fresh_id(toks);
            toks[c] = id;
            toks[w] = id;
            true
        }
        (PortKind::Plug, PortKind::Terminal(t)) => {
            toks[c] = term(t);
            true
        }
        (PortKind::Terminal(t), PortKind::Plug) => {
            toks[w] = term(t);
            true
        }
        (PortKind::Terminal(t1), PortKind::Terminal(t2)) => {
            fin.push((t1.min(t2), t1.max(t2)));
            true
        }
        _ => false,
    }
}

/// Replaces the other occurrence of pair id `from` with `to`.
fn relabel(toks: &mut [u16], from: u16, to: u16) {
    for t in toks.iter_mut() {
        if *t == from {
            *t = to;
            return; // ids occur at most twice and one end was just consumed
        }
    }
    // the pair's other end may already have been consumed in this very cell
    // only when joining both ends of one pair, which is handled in join()
    unreachable!("dangling strand id {from}");
}

/// Renumbers pair ids in order of first appearance.
fn canonicalize(toks: &mut [u16]) {
    let mut map: BTreeMap<u16, u16> = BTreeMap::new();
    let mut nxt = 1u16;
    for t in toks.iter_mut() {
        if *t == EMPTY || is_term(*t) {
            continue;
        }
        let id = *map.entry(*t).or_insert_with(|| {
            let v = nxt;
            nxt += 1;
            v
        });
        *t = id;
    }
}

fn fresh_id(toks: &[u16]) -> u16 {
    (1u16..).find(|id| !toks.contains(id)).unwrap()
}
