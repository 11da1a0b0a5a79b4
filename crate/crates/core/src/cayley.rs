//! Exhaustive enumeration of the groups of a tiny order by Cayley tables.
//!
//! The search fills a multiplication table with element 0 as identity.
//! Every placed entry is pushed through the associativity law in all four
//! positions it can occupy in a triple, so most entries are forced rather
//! than guessed. Labels that have not yet appeared anywhere are
//! interchangeable, so a fresh label is only ever introduced as the smallest
//! unused one. Completed tables are reduced to a canonical form and
//! deduplicated.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::CensusError;
use crate::limits::Limits;

const EMPTY: u8 = u8::MAX;

/// A full group multiplication table on `0..n`, with 0 the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CayleyTable {
    n: usize,
    table: Vec<u8>,
}

impl CayleyTable {
    pub fn new(n: usize, table: Vec<u8>) -> Result<Self, String> {
        let t = CayleyTable { n, table };
        t.validate()?;
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.table.chunks(self.n)
    }

    /// Checks the Latin property, the identity, inverses and associativity.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.n;
        if n == 0 || self.table.len() != n * n {
            return Err(format!(
                "table of length {} for order {n}",
                self.table.len()
            ));
        }
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for i in 0..n {
            let mut row = 0u64;
            let mut col = 0u64;
            for j in 0..n {
                let (r, c) = (self.mul(i, j), self.mul(j, i));
                if r >= n || c >= n {
                    return Err(format!("entry out of range at ({i}, {j})"));
                }
                row |= 1 << r;
                col |= 1 << c;
            }
            if row != full || col != full {
                return Err(format!("row or column {i} is not a permutation"));
            }
            if self.mul(0, i) != i || self.mul(i, 0) != i {
                return Err(format!("0 is not an identity for {i}"));
            }
            if !(0..n).any(|j| self.mul(i, j) == 0 && self.mul(j, i) == 0) {
                return Err(format!("{i} has no inverse"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("({a} {b}) {c} != {a} ({b} {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Labels elements in breadth-first order from `gens`: the identity first,
    /// then whatever right multiplication by the generators reaches, in order.
    fn bfs_relabel(&self, gens: &[usize]) -> Option<Vec<u8>> {
        let n = self.n;
        let mut label = vec![EMPTY; n];
        let mut order = Vec::with_capacity(n);
        label[0] = 0;
        order.push(0);
        let mut at = 0;
        while at < order.len() {
            let x = order[at];
            for &g in gens {
                let y = self.mul(x, g);
                if label[y] == EMPTY {
                    label[y] = order.len() as u8;
                    order.push(y);
                }
            }
            at += 1;
        }
        if order.len() != n {
            return None;
        }
        let mut out = vec![0u8; n * n];
        for (new_a, &a) in order.iter().enumerate() {
            for (new_b, &b) in order.iter().enumerate() {
                out[new_a * n + new_b] = label[self.mul(a, b)];
            }
        }
        Some(out)
    }

    fn generates(&self, gens: &[usize]) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    /// Smallest number of elements that generate the group.
    pub fn rank(&self) -> usize {
        (0..=self.n)
            .find(|&k| {
                let mut found = false;
                for_each_tuple(self.n, k, &mut |t| {
                    if !found && self.generates(t) {
                        found = true;
                    }
                });
                found
            })
            .expect("the whole group generates itself")
    }

    /// Canonical form: the lexicographically least breadth-first relabelling
    /// over all generating tuples of minimal length. Two tables have the same
    /// canonical form exactly when their groups are isomorphic.
    pub fn canonical(&self) -> CayleyTable {
        if self.n == 1 {
            return self.clone();
        }
        let k = self.rank();
        let mut best: Option<Vec<u8>> = None;
        for_each_tuple(self.n, k, &mut |t| {
            if let Some(relabelled) = self.bfs_relabel(t) {
                if best.as_ref().is_none_or(|b| relabelled < *b) {
                    best = Some(relabelled);
                }
            }
        });
        CayleyTable {
            n: self.n,
            table: best.expect("some minimal tuple generates"),
        }
    }
}

/// Calls `f` on every ordered `k`-tuple of distinct non-identity elements.
fn for_each_tuple(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for x in 1..n {
            if !cur.contains(&x) {
                cur.push(x);
                rec(n, k, cur, f);
                cur.pop();
            }
        }
    }
    rec(n, k, &mut Vec::with_capacity(k), f);
}

/// Backtracking state for one partially filled table.
#[derive(Clone)]
struct Search {
    n: usize,
    table: Vec<u8>,
    /// `left[y * n + v] = x` when `x * y = v`.
    left: Vec<u8>,
    /// `right[x * n + v] = z` when `x * z = v`.
    right: Vec<u8>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    trail: Vec<u16>,
    queue: Vec<u16>,
    /// Largest label that has appeared off the identity row and column.
    top: usize,
}

impl Search {
    fn new(n: usize) -> Self {
        let mut s = Search {
            n,
            table: vec![EMPTY; n * n],
            left: vec![EMPTY; n * n],
            right: vec![EMPTY; n * n],
            row_used: vec![0; n],
            col_used: vec![0; n],
            trail: Vec::new(),
            queue: Vec::new(),
            top: 0,
        };
        for i in 0..n {
            s.write(0, i, i as u8);
            s.write(i, 0, i as u8);
        }
        s.trail.clear();
        s.top = usize::from(n > 1);
        s
    }

    fn get(&self, a: usize, b: usize) -> u8 {
        self.table[a * self.n + b]
    }

    fn write(&mut self, a: usize, b: usize, c: u8) {
        let n = self.n;
        if self.table[a * n + b] != EMPTY {
            return;
        }
        self.table[a * n + b] = c;
        self.left[b * n + c as usize] = a as u8;
        self.right[a * n + c as usize] = b as u8;
        self.row_used[a] |= 1 << c;
        self.col_used[b] |= 1 << c;
        self.trail.push((a * n + b) as u16);
    }

    fn undo_to(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            let cell = self.trail.pop().unwrap() as usize;
            let (a, b) = (cell / n, cell % n);
            let c = self.table[cell] as usize;
            self.table[cell] = EMPTY;
            self.left[b * n + c] = EMPTY;
            self.right[a * n + c] = EMPTY;
            self.row_used[a] &= !(1 << c);
            self.col_used[b] &= !(1 << c);
        }
    }

    /// Places `a * b = c`, or reports a contradiction.
    fn assign(&mut self, a: usize, b: usize, c: u8) -> bool {
        let cur = self.get(a, b);
        if cur != EMPTY {
            return cur == c;
        }
        if self.row_used[a] >> c & 1 == 1 || self.col_used[b] >> c & 1 == 1 {
            return false;
        }
        self.write(a, b, c);
        self.queue.push((a * self.n + b) as u16);
        true
    }

    /// Requires `T[i1][j1] = T[i2][j2]`, filling in whichever side is missing.
    fn unify(&mut self, i1: usize, j1: usize, i2: usize, j2: usize) -> bool {
        match (self.get(i1, j1), self.get(i2, j2)) {
            (EMPTY, EMPTY) => true,
            (EMPTY, v) => self.assign(i1, j1, v),
            (v, EMPTY) => self.assign(i2, j2, v),
            (u, v) => u == v,
        }
    }

    /// Pushes every queued entry through associativity until nothing changes.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some(cell) = self.queue.pop() {
            let (a, b) = (cell as usize / n, cell as usize % n);
            let c = self.get(a, b) as usize;
            for k in 1..n {
                // (a b) k = a (b k)
                let bk = self.get(b, k);
                if bk != EMPTY && !self.unify(c, k, a, bk as usize) {
                    return false;
                }
                // (k a) b = k (a b)
                let ka = self.get(k, a);
                if ka != EMPTY && !self.unify(ka as usize, b, k, c) {
                    return false;
                }
                // a b = (x k) b = x (k b) where x k = a
                let x = self.left[k * n + a];
                let kb = self.get(k, b);
                if x != EMPTY && kb != EMPTY && !self.assign(x as usize, kb as usize, c as u8) {
                    return false;
                }
                // a b = a (k z) = (a k) z where k z = b
                let z = self.right[k * n + b];
                let ak = self.get(a, k);
                if z != EMPTY && ak != EMPTY && !self.assign(ak as usize, z as usize, c as u8) {
                    return false;
                }
            }
        }
        true
    }

    fn place(&mut self, a: usize, b: usize, c: u8) -> bool {
        if c as usize > self.top {
            self.top = c as usize;
        }
        self.assign(a, b, c) && self.propagate()
    }

    fn free_values(&self, a: usize, b: usize) -> u32 {
        let limit = (self.top + 2).min(self.n);
        let mask = (1u32 << limit) - 1;
        !(self.row_used[a] | self.col_used[b]) & mask
    }

    /// Empty cell inside the labels seen so far with the fewest candidates.
    fn pick_cell(&self) -> Option<(usize, usize, u32)> {
        let mut best: Option<(usize, usize, u32)> = None;
        for a in 1..=self.top {
            for b in 1..=self.top {
                if self.get(a, b) == EMPTY {
                    let free = self.free_values(a, b);
                    if best.is_none_or(|(_, _, f)| free.count_ones() < f.count_ones()) {
                        best = Some((a, b, free));
                        if free.count_ones() <= 1 {
                            return best;
                        }
                    }
                }
            }
        }
        best
    }

    /// Advances past closed subtables. Returns `Err(())` on a dead end,
    /// `Ok(None)` on a complete table, otherwise the next branching cell.
    fn next_branch(&mut self) -> Result<Option<(usize, usize, u32)>, ()> {
        loop {
            match self.pick_cell() {
                Some((_, _, 0)) => return Err(()),
                Some(cell) => return Ok(Some(cell)),
                None => {
                    // labels 0..=top are closed under multiplication
                    let sub = self.top + 1;
                    if !self.n.is_multiple_of(sub) {
                        return Err(());
                    }
                    if sub == self.n {
                        return Ok(None);
                    }
                    self.top += 1;
                }
            }
        }
    }

    fn finished(&self) -> CayleyTable {
        let t = CayleyTable {
            n: self.n,
            table: self.table.clone(),
        };
        if let Err(e) = t.validate() {
            panic!("search produced an invalid table: {e}");
        }
        t
    }

    fn explore(&mut self, out: &mut HashSet<CayleyTable>) {
        let saved_top = self.top;
        match self.next_branch() {
            Err(()) => {}
            Ok(None) => {
                out.insert(self.finished().canonical());
            }
            Ok(Some((a, b, free))) => {
                let top = self.top;
                for c in 0..self.n as u8 {
                    if free >> c & 1 == 0 {
                        continue;
                    }
                    let mark = self.trail.len();
                    if self.place(a, b, c) {
                        self.explore(out);
                    }
                    self.queue.clear();
                    self.undo_to(mark);
                    self.top = top;
                }
            }
        }
        self.top = saved_top;
    }

    /// Splits the search tree into independent subtrees of roughly `depth`
    /// branching levels, collecting any tables completed on the way.
    fn frontier(mut self, depth: usize, done: &mut HashSet<CayleyTable>) -> Vec<Search> {
        if depth == 0 {
            return vec![self];
        }
        match self.next_branch() {
            Err(()) => Vec::new(),
            Ok(None) => {
                done.insert(self.finished().canonical());
                Vec::new()
            }
            Ok(Some((a, b, free))) => {
                let mut subtrees = Vec::new();
                for c in 0..self.n as u8 {
                    if free >> c & 1 == 0 {
                        continue;
                    }
                    let mut child = self.clone();
                    if child.place(a, b, c) {
                        subtrees.extend(child.frontier(depth - 1, done));
                    }
                }
                subtrees
            }
        }
    }
}

/// One canonical table per isomorphism class of groups of order `n`,
/// sorted.
pub fn group_tables(n: u32, limits: &Limits) -> Result<Vec<CayleyTable>, CensusError> {
    if n == 0 {
        return Err(CensusError::ZeroOrder);
    }
    if n > limits.max_cayley_order {
        return Err(CensusError::ResourceCap {
            what: format!("Cayley search for order {n}"),
            needed: n as u64,
            cap: limits.max_cayley_order as u64,
        });
    }
    if n > 31 {
        return Err(CensusError::Precondition(format!(
            "Cayley search supports orders below 32, got {n}"
        )));
    }
    let mut found = HashSet::new();
    let subtrees = Search::new(n as usize).frontier(3, &mut found);
    let parts: Vec<HashSet<CayleyTable>> = subtrees
        .into_par_iter()
        .map(|mut s| {
            let mut out = HashSet::new();
            s.explore(&mut out);
            out
        })
        .collect();
    for part in parts {
        found.extend(part);
    }
    let mut tables: Vec<CayleyTable> = found.into_iter().collect();
    tables.sort();
    Ok(tables)
}

/// Number of isomorphism classes of groups of order `n`.
pub fn enumerate_groups(n: u32, limits: &Limits) -> Result<usize, CensusError> {
    group_tables(n, limits).map(|t| t.len())
}
