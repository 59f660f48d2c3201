//! Bitset covering-set probe and cardinality-level subset scanning.
//!
//! This is the hot path of every exact search. It is deliberately separate
//! from the definition-level predicates in `covering`, which serve as the
//! independent reference the solver is tested against.

use crate::budget::{Budget, BudgetExceeded, Meter};
use crate::covering::Direction;
use crate::graph::DominanceGraph;
use crate::set::AltSet;

/// Covering-set test specialised to one graph and direction.
pub(crate) struct Probe {
    dir: Direction,
    inn: Vec<u128>,
    out: Vec<u128>,
}

impl Probe {
    pub fn new(g: &DominanceGraph, dir: Direction) -> Self {
        Probe {
            dir,
            inn: (0..g.len()).map(|x| g.in_set(x).bits()).collect(),
            out: (0..g.len()).map(|x| g.out_set(x).bits()).collect(),
        }
    }

    /// Whether some `y ∈ s` covers `x` within `s ∪ {x}`.
    #[inline]
    fn covered(&self, x: usize, s: u128) -> bool {
        let inx = self.inn[x];
        let mut cand = inx & s;
        match self.dir {
            Direction::Upward => {
                while cand != 0 {
                    let y = cand.trailing_zeros() as usize;
                    cand &= cand - 1;
                    if self.inn[y] & s & !inx == 0 {
                        return true;
                    }
                }
            }
            Direction::Downward => {
                let below = self.out[x] & s;
                while cand != 0 {
                    let y = cand.trailing_zeros() as usize;
                    cand &= cand - 1;
                    if below & !self.out[y] == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// `s` is a covering set iff exactly its non-members are covered.
    #[inline]
    pub fn is_covering(&self, s: u128) -> bool {
        let n = self.inn.len();
        // Every outsider needs at least one dominator inside `s`.
        for x in 0..n {
            if s >> x & 1 == 0 && self.inn[x] & s == 0 {
                return false;
            }
        }
        for x in 0..n {
            if self.covered(x, s) == (s >> x & 1 == 1) {
                return false;
            }
        }
        true
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).unwrap_or(u64::MAX)
}

/// Scans subsets `forced ∪ T` with `T` drawn from a pool of free positions.
pub(crate) struct Scan<'a> {
    probe: &'a Probe,
    forced: u128,
    free: Vec<usize>,
    // tables[c][b]: positions selected by byte `b` of the free-index mask, chunk `c`.
    tables: Vec<[u128; 256]>,
    pub meter: Meter,
}

impl<'a> Scan<'a> {
    pub fn new(probe: &'a Probe, forced: AltSet, free: AltSet, meter: Meter) -> Result<Self, BudgetExceeded> {
        let free = free - forced;
        meter.check_free(free.len())?;
        let free: Vec<usize> = free.to_vec();
        let tables = free
            .chunks(8)
            .map(|chunk| {
                let mut t = [0u128; 256];
                for (b, slot) in t.iter_mut().enumerate() {
                    *slot = chunk
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| b >> j & 1 == 1)
                        .fold(0u128, |acc, (_, &p)| acc | 1u128 << p);
                }
                t
            })
            .collect();
        Ok(Scan { probe, forced: forced.bits(), free, tables, meter })
    }

    pub fn free_len(&self) -> usize {
        self.free.len()
    }

    pub fn forced(&self) -> AltSet {
        AltSet::from_bits(self.forced)
    }

    #[inline]
    fn deposit(&self, mut mask: u64) -> u128 {
        let mut s = self.forced;
        let mut c = 0;
        while mask != 0 {
            s |= self.tables[c][(mask & 0xff) as usize];
            mask >>= 8;
            c += 1;
        }
        s
    }

    /// Covering sets with exactly `k` free members, in canonical order. With
    /// `first_only`, stops after the first hit (which is then not necessarily
    /// the canonically first one).
    pub fn level(&mut self, k: usize, first_only: bool) -> Result<Vec<AltSet>, BudgetExceeded> {
        let f = self.free.len();
        let count = binomial(f, k);
        self.meter.reserve(count)?;
        self.meter.check_time()?;
        let mut hits = Vec::new();
        if k > f {
            return Ok(hits);
        }
        let limit: u64 = 1u64 << f;
        let mut c: u64 = if k == 0 { 0 } else { (1u64 << k) - 1 };
        let mut since_check: u32 = 0;
        loop {
            let s = self.deposit(c);
            self.meter.probes += 1;
            if self.probe.is_covering(s) {
                hits.push(AltSet::from_bits(s));
                if first_only {
                    break;
                }
            }
            if k == 0 {
                break;
            }
            // Gosper's hack: next integer with the same popcount.
            let u = c & c.wrapping_neg();
            let v = c + u;
            c = v + (((v ^ c) / u) >> 2);
            if c >= limit {
                break;
            }
            since_check += 1;
            if since_check == 1 << 16 {
                since_check = 0;
                self.meter.check_time()?;
            }
        }
        hits.sort_by(|a, b| a.canonical_cmp(*b));
        Ok(hits)
    }
}

/// Minimality of a covering set `m`: probes proper subsets of `m` that keep
/// the graph's undominated alternatives, largest first. Returns the verdict
/// and the number of subsets probed.
pub(crate) fn check_minimal(
    g: &DominanceGraph,
    m: AltSet,
    dir: Direction,
    budget: &Budget,
) -> Result<(bool, u64), BudgetExceeded> {
    let mandatory = g.undominated();
    if !mandatory.is_subset(m) {
        // Not a covering set at all; callers check that first.
        return Ok((false, 0));
    }
    let probe = Probe::new(g, dir);
    let meter = Meter::new(budget).relaxed_free();
    let free = (m - mandatory).len();
    meter.reserve(1u64.checked_shl(free as u32).unwrap_or(u64::MAX))?;
    let mut scan = Scan::new(&probe, mandatory, m, meter)?;
    for k in (0..scan.free_len()).rev() {
        if !scan.level(k, true)?.is_empty() {
            return Ok((false, scan.meter.probes));
        }
    }
    Ok((true, scan.meter.probes))
}
