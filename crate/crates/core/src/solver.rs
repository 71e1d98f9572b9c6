//! Depth-bounded exhaustive Clifford search on a k-qubit subsystem.
//!
//! A Clifford supported on the subsystem only rewrites the subsystem columns
//! of each term, so the search runs on a [`SubsystemView`]: the distinct
//! restricted words, each carrying the number of global terms (and the sum of
//! their coefficient magnitudes) that restrict to it. Restricted cost changes
//! equal global cost changes exactly.
//!
//! Gates are enumerated as all `H` by qubit, then all `S`, then all `CNOT` in
//! (control, target) order. The search returns the minimum-cost sequence of
//! at most `depth` gates; ties go to the shorter sequence, then to the one
//! enumerated first. The branches skipped below never contain that winner:
//!
//! * an `H` or `CNOT` repeated back to back (the pair cancels),
//! * a fourth consecutive `S` on one qubit (`S⁴ = I`),
//! * two adjacent gates on disjoint qubits in decreasing enumeration order
//!   (they commute, and the swapped order is enumerated first).

use std::collections::HashMap;

use crate::clifford::{conjugate_hamiltonian, CliffordGate, GateSequence};
use crate::error::{Error, Result};
use crate::par;
use crate::pauli::{CostKind, PauliString, QubitHamiltonian};

/// Largest subsystem the packed view supports.
pub const MAX_WIDTH: usize = 32;

/// One distinct restricted word with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViewEntry {
    pub x: u32,
    pub z: u32,
    pub count: u64,
    pub abs_coeff_sum: f64,
}

impl ViewEntry {
    #[inline]
    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    fn cost_weight(&self, kind: CostKind) -> f64 {
        match kind {
            CostKind::Pw => self.count as f64,
            CostKind::Wpw => self.abs_coeff_sum,
        }
    }
}

/// Aggregated restriction of a Hamiltonian to an ordered set of qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsystemView {
    indices: Vec<usize>,
    /// Sorted by `(x, z)`.
    entries: Vec<ViewEntry>,
    /// `parent_links[j]` is the entry that global term `j` restricts to.
    parent_links: Vec<usize>,
}

impl SubsystemView {
    pub fn width(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn entries(&self) -> &[ViewEntry] {
        &self.entries
    }

    pub fn parent_links(&self) -> &[usize] {
        &self.parent_links
    }

    /// Restricted word of entry `e` as a `k`-qubit Pauli string.
    pub fn entry_word(&self, e: &ViewEntry) -> PauliString {
        let mut p = PauliString::identity(self.width());
        for q in 0..self.width() {
            p.set_bits(q, (e.x >> q) & 1 == 1, (e.z >> q) & 1 == 1);
        }
        p
    }

    /// Cost carried by the subsystem columns.
    pub fn cost(&self, kind: CostKind) -> f64 {
        self.entries
            .iter()
            .map(|e| e.cost_weight(kind) * e.weight() as f64)
            .sum()
    }

    /// Hashable summary of the non-trivial entries under `kind`; equal keys
    /// mean [`dfs_search`] returns the same sequence.
    pub fn search_key(&self, kind: CostKind) -> Vec<u64> {
        let mut key = Vec::with_capacity(2 * self.entries.len() + 1);
        key.push(self.width() as u64);
        for e in self.entries.iter().filter(|e| e.weight() > 0) {
            key.push(((e.x as u64) << 32) | e.z as u64);
            key.push(match kind {
                CostKind::Pw => e.count,
                CostKind::Wpw => e.abs_coeff_sum.to_bits(),
            });
        }
        key
    }
}

/// Builds the restricted view of `h` on `indices` (local qubit `i` is global
/// qubit `indices[i]`).
pub fn restrict(h: &QubitHamiltonian, indices: &[usize]) -> Result<SubsystemView> {
    let n = h.n_qubits();
    if indices.len() > MAX_WIDTH {
        return Err(Error::InvalidConfig(format!(
            "subsystem width {} exceeds {MAX_WIDTH}",
            indices.len()
        )));
    }
    let mut seen = vec![false; n];
    for &q in indices {
        if q >= n {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: n,
            });
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::DuplicateIndex(q));
        }
    }

    let words = par::map(h.terms(), |(p, _)| {
        let (xs, zs) = (p.x_limbs(), p.z_limbs());
        let mut x = 0u32;
        let mut z = 0u32;
        for (i, &q) in indices.iter().enumerate() {
            x |= (((xs[q / 64] >> (q % 64)) & 1) as u32) << i;
            z |= (((zs[q / 64] >> (q % 64)) & 1) as u32) << i;
        }
        (x, z)
    });

    let mut slot: HashMap<(u32, u32), usize> = HashMap::new();
    let mut entries: Vec<ViewEntry> = Vec::new();
    let mut links = Vec::with_capacity(words.len());
    for (&(x, z), (_, c)) in words.iter().zip(h.terms()) {
        let idx = *slot.entry((x, z)).or_insert_with(|| {
            entries.push(ViewEntry {
                x,
                z,
                count: 0,
                abs_coeff_sum: 0.0,
            });
            entries.len() - 1
        });
        entries[idx].count += 1;
        entries[idx].abs_coeff_sum += c.abs();
        links.push(idx);
    }

    // canonical entry order
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_unstable_by_key(|&i| (entries[i].x, entries[i].z));
    let mut rank = vec![0usize; entries.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let entries = order.iter().map(|&i| entries[i]).collect();
    let parent_links = links.into_iter().map(|i| rank[i]).collect();

    Ok(SubsystemView {
        indices: indices.to_vec(),
        entries,
        parent_links,
    })
}

/// Search parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub width: usize,
    /// Maximum number of gates.
    pub depth: usize,
    pub cost_kind: CostKind,
    /// Skip states already reached by an earlier, no-longer prefix.
    pub transposition_table: bool,
}

impl SolverConfig {
    pub fn new(width: usize, depth: usize, cost_kind: CostKind) -> Self {
        Self {
            width,
            depth,
            cost_kind,
            transposition_table: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.width > MAX_WIDTH {
            return Err(Error::InvalidConfig(format!(
                "width {} outside 1..={MAX_WIDTH}",
                self.width
            )));
        }
        Ok(())
    }
}

/// The gate alphabet on `k` qubits in enumeration order.
pub fn gate_alphabet(k: usize) -> Vec<CliffordGate> {
    let mut gates: Vec<CliffordGate> = (0..k).map(CliffordGate::H).collect();
    gates.extend((0..k).map(CliffordGate::S));
    for c in 0..k {
        for t in 0..k {
            if c != t {
                gates.push(CliffordGate::cnot(c, t));
            }
        }
    }
    gates
}

#[derive(Clone, Copy)]
struct LocalGate {
    gate: CliffordGate,
    mask: u32,
    self_inverse: bool,
}

impl LocalGate {
    fn new(gate: CliffordGate) -> Self {
        let (mask, self_inverse) = match gate {
            CliffordGate::H(q) => (1 << q, true),
            CliffordGate::S(q) => (1 << q, false),
            CliffordGate::Cnot { control, target } => ((1 << control) | (1 << target), true),
        };
        Self {
            gate,
            mask,
            self_inverse,
        }
    }

    #[inline]
    fn apply(&self, w: &mut (u32, u32)) {
        let (x, z) = w;
        match self.gate {
            CliffordGate::H(q) => {
                let b = ((*x ^ *z) >> q) & 1;
                *x ^= b << q;
                *z ^= b << q;
            }
            CliffordGate::S(q) => *z ^= *x & (1 << q),
            CliffordGate::Cnot { control, target } => {
                *x ^= ((*x >> control) & 1) << target;
                *z ^= ((*z >> target) & 1) << control;
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Best {
    cost: f64,
    seq: Vec<u16>,
}

impl Best {
    /// True when `(cost, len)` beats `self` under the margin.
    fn beaten_by(&self, cost: f64, len: usize, margin: f64) -> bool {
        cost < self.cost - margin || ((cost - self.cost).abs() <= margin && len < self.seq.len())
    }
}

struct Search<'a> {
    gates: &'a [LocalGate],
    weights: &'a [f64],
    depth: usize,
    margin: f64,
    floor: f64,
    levels: Vec<Vec<(u32, u32)>>,
    stack: Vec<u16>,
    best: Best,
    seen: Option<HashMap<Vec<(u32, u32)>, usize>>,
}

impl<'a> Search<'a> {
    fn cost(&self, words: &[(u32, u32)]) -> f64 {
        words
            .iter()
            .zip(self.weights)
            .map(|(&(x, z), w)| w * (x | z).count_ones() as f64)
            .sum()
    }

    fn allowed(&self, g: usize) -> bool {
        let Some(&prev) = self.stack.last() else {
            return true;
        };
        let prev = prev as usize;
        let (cur, last) = (&self.gates[g], &self.gates[prev]);
        if g == prev && cur.self_inverse {
            return false;
        }
        if cur.mask & last.mask == 0 && g < prev {
            return false;
        }
        if !cur.self_inverse && g == prev {
            let run = self
                .stack
                .iter()
                .rev()
                .take_while(|&&s| s as usize == g)
                .count();
            if run >= 3 {
                return false;
            }
        }
        true
    }

    /// Visits the node whose words sit at `levels[level]`.
    fn visit(&mut self, level: usize) {
        if let Some(seen) = self.seen.as_mut() {
            let state = self.levels[level].clone();
            match seen.get(&state) {
                Some(&len) if len <= level => return,
                _ => {
                    seen.insert(state, level);
                }
            }
        }
        let cost = self.cost(&self.levels[level]);
        if self.best.beaten_by(cost, level, self.margin) {
            self.best = Best {
                cost,
                seq: self.stack.clone(),
            };
        }
        if level == self.depth {
            return;
        }
        // nothing below can lower the cost further or be shorter than the best
        if self.best.cost <= self.floor + self.margin && level + 1 >= self.best.seq.len() {
            return;
        }
        for g in 0..self.gates.len() {
            if !self.allowed(g) {
                continue;
            }
            self.descend(level, g);
        }
    }

    fn descend(&mut self, level: usize, g: usize) {
        let (head, tail) = self.levels.split_at_mut(level + 1);
        let (src, dst) = (&head[level], &mut tail[0]);
        dst.clear();
        dst.extend(src.iter().map(|&w| {
            let mut w = w;
            self.gates[g].apply(&mut w);
            w
        }));
        self.stack.push(g as u16);
        self.visit(level + 1);
        self.stack.pop();
    }
}

/// Search result with the restricted costs before and after.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    /// Local gate sequence; empty when no strict improvement exists.
    pub sequence: GateSequence,
    pub cost_before: f64,
    pub cost_after: f64,
}

/// Runs the bounded search and reports the restricted cost change.
pub fn solve(view: &SubsystemView, cfg: &SolverConfig) -> SolveOutcome {
    let k = view.width();
    let kind = cfg.cost_kind;
    let margin = kind.margin();
    // identity restrictions never change, so only the rest enters the search
    let active: Vec<&ViewEntry> = view.entries.iter().filter(|e| e.weight() > 0).collect();
    let words: Vec<(u32, u32)> = active.iter().map(|e| (e.x, e.z)).collect();
    let weights: Vec<f64> = active.iter().map(|e| e.cost_weight(kind)).collect();
    let floor: f64 = weights.iter().sum();
    let initial: f64 = view.cost(kind);

    let alphabet: Vec<LocalGate> = gate_alphabet(k).into_iter().map(LocalGate::new).collect();
    let root = Best {
        cost: initial,
        seq: Vec::new(),
    };
    let unchanged = SolveOutcome {
        sequence: GateSequence::default(),
        cost_before: initial,
        cost_after: initial,
    };
    if cfg.depth == 0 || words.is_empty() || initial <= floor + margin {
        // every active word already has weight one
        return unchanged;
    }

    let new_search = |best: Best| Search {
        gates: &alphabet,
        weights: &weights,
        depth: cfg.depth,
        margin,
        floor,
        levels: vec![Vec::with_capacity(words.len()); cfg.depth + 1],
        stack: Vec::with_capacity(cfg.depth),
        best,
        seen: cfg.transposition_table.then(HashMap::new),
    };

    // one subtree per first gate; merged in enumeration order
    let branches = par::map_range(alphabet.len(), |g| {
        let mut s = new_search(root.clone());
        s.levels[0].extend_from_slice(&words);
        s.descend(0, g);
        s.best
    });
    let mut best = root;
    for b in branches {
        if best.beaten_by(b.cost, b.seq.len(), margin) {
            best = b;
        }
    }

    if best.cost < initial - margin {
        SolveOutcome {
            sequence: GateSequence::new(
                best.seq
                    .iter()
                    .map(|&g| alphabet[g as usize].gate)
                    .collect(),
            ),
            cost_before: initial,
            cost_after: best.cost,
        }
    } else {
        unchanged
    }
}

/// The best gate sequence of length at most `cfg.depth` on `view`.
pub fn dfs_search(view: &SubsystemView, cfg: &SolverConfig) -> GateSequence {
    solve(view, cfg).sequence
}

/// Conjugates `h` by a local sequence placed on the global qubits `indices`.
pub fn apply_to_global(
    h: &QubitHamiltonian,
    indices: &[usize],
    seq: &GateSequence,
) -> Result<QubitHamiltonian> {
    seq.validate(indices.len())?;
    conjugate_hamiltonian(&seq.relabel(indices), h)
}
