
use super::rule::RateRule;
use super::sim::HittingRecord;
use crate::lattice::{Domain, SpinConfig};
use crate::rng::EventStream;

#[derive(Clone, Debug)]
pub struct CouplingReport {
    pub events: u64,
    /// Events after which some requested pair was out of order.
    pub order_violations: u64,
    /// First time all members agree; `Some(0.0)` if they start equal.
    pub coalescence: Option<f64>,
    pub hitting: Vec<HittingRecord>,
    pub finals: Vec<SpinConfig>,
}

/// Runs every member on the same event stream with a shared uniform per
/// event. Members may carry different boundary layers (build them on
/// [`Domain::rebound`] copies of `dom`); the site set must be `dom`'s.
/// For each `(i, j)` in `ordered`, `σ^i ≤ σ^j` is checked at the updated
/// site after every event.
pub fn grand_coupling_simulate(
    dom: &Domain,
    initials: &[SpinConfig],
    rule: RateRule,
    horizon: f64,
    seed: u64,
    ordered: &[(usize, usize)],
) -> CouplingReport {
    let mut states: Vec<SpinConfig> = initials.to_vec();
    let table = rule.table(dom.dim());
    let shift = 2 * dom.dim() as i32;
    let k = states.len();
    let mut diff: Vec<usize> = states.iter().map(|s| s.disagreements(dom, &states[0])).collect();
    let mut unequal = diff.iter().filter(|&&d| d > 0).count();
    let mut coalescence = (unequal == 0).then_some(0.0);
    let mut taus: Vec<Option<f64>> = states.iter().map(|s| s.is_all_plus().then_some(0.0)).collect();
    let mut violations = 0;
    let mut events = 0;
    let mut stream = EventStream::new(seed, dom.len(), 1.0);
    loop {
        let e = stream.next_event();
        if e.time > horizon {
            break;
        }
        events += 1;
        let before0 = states[0].get(dom, e.site);
        let was: Vec<bool> = (1..k).map(|m| states[m].get(dom, e.site) != before0).collect();
        for (m, st) in states.iter_mut().enumerate() {
            let s = st.neighbor_sum(dom, e.site);
            if st.set(dom, e.site, if e.u < table[(s + shift) as usize] { 1 } else { -1 }) && taus[m].is_none() && st.is_all_plus() {
                taus[m] = Some(e.time);
            }
        }
        let after0 = states[0].get(dom, e.site);
        for m in 1..k {
            let now = states[m].get(dom, e.site) != after0;
            if now != was[m - 1] {
                if now {
                    if diff[m] == 0 {
                        unequal += 1;
                    }
                    diff[m] += 1;
                } else {
                    diff[m] -= 1;
                    if diff[m] == 0 {
                        unequal -= 1;
                    }
                }
            }
        }
        if unequal == 0 && coalescence.is_none() {
            coalescence = Some(e.time);
        }
        if ordered.iter().any(|&(i, j)| states[i].get(dom, e.site) > states[j].get(dom, e.site)) {
            violations += 1;
        }
    }
    let hitting = states
        .iter()
        .zip(&taus)
        .map(|(s, t)| HittingRecord { tau_plus: *t, events, final_hash: s.hash64(dom) })
        .collect();
    CouplingReport { events, order_violations: violations, coalescence, hitting, finals: states }
}
