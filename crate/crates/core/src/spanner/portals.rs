//! Portal selection on a closed boundary walk.

use serde::Serialize;

/// Positions along the walk chosen as portals (sorted, distinct vertices).
///
/// If the walk has at most `3θ` distinct vertices all of them are portals;
/// otherwise `3θ` positions are spread evenly by hop length.
pub fn select_portals(walk: &[usize], theta: usize) -> Vec<usize> {
    let mut distinct = walk.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let slots = 3 * theta;
    if distinct.len() <= slots {
        let mut seen = std::collections::HashSet::new();
        return (0..walk.len()).filter(|&i| seen.insert(walk[i])).collect();
    }
    let len = walk.len();
    let mut seen = std::collections::HashSet::new();
    (0..slots).map(|k| k * len / slots).filter(|&p| seen.insert(walk[p])).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CoverageReport {
    pub portals: usize,
    pub boundary_vertices: usize,
    pub length_violations: usize,
    pub cost_violations: usize,
    /// Boundary vertices with no single portal meeting both bounds.
    pub joint_violations: usize,
}

impl CoverageReport {
    pub fn holds(&self, theta: usize) -> bool {
        self.portals <= 3 * theta && self.joint_violations == 0
    }
}

/// Checks every boundary position against every portal: some portal must be
/// within hop length `ℓ(∂B)/(3θ)` and node-weighted cost `c(∂B)/θ` along the
/// boundary, both endpoints included in the cost. A portal is at distance
/// zero from itself.
pub fn check_coverage(walk: &[usize], weight: impl Fn(usize) -> f64, portals: &[usize], theta: usize) -> CoverageReport {
    let len = walk.len();
    let mut distinct = walk.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut rep = CoverageReport { portals: portals.len(), boundary_vertices: distinct.len(), ..Default::default() };
    if len == 0 {
        return rep;
    }
    let total_len = len as f64;
    let total_cost: f64 = walk.iter().map(|&v| weight(v)).sum();
    let len_bound = total_len / (3.0 * theta as f64);
    let cost_bound = total_cost / theta as f64;
    // prefix[i] = cost of positions 0..i
    let mut prefix = vec![0.0; len + 1];
    for i in 0..len {
        prefix[i + 1] = prefix[i] + weight(walk[i]);
    }
    // forward arc from a to b inclusive
    let arc = |a: usize, b: usize| -> (usize, f64) {
        if a <= b {
            (b - a, prefix[b + 1] - prefix[a])
        } else {
            (len - a + b, prefix[len] - prefix[a] + prefix[b + 1])
        }
    };
    let is_portal: Vec<bool> = {
        let mut pv = vec![false; len];
        let set: std::collections::HashSet<usize> = portals.iter().map(|&p| walk[p]).collect();
        for i in 0..len {
            pv[i] = set.contains(&walk[i]);
        }
        pv
    };
    for &v in &distinct {
        let mut ok_len = false;
        let mut ok_cost = false;
        let mut ok_both = false;
        for q in (0..len).filter(|&q| walk[q] == v) {
            if is_portal[q] {
                // a portal covers itself with the empty path
                ok_len = true;
                ok_cost = true;
                ok_both = true;
                break;
            }
            for p in (0..len).filter(|&p| is_portal[p]) {
                let (l1, c1) = arc(q, p);
                let (l2, c2) = arc(p, q);
                let l = l1.min(l2) as f64;
                let c = c1.min(c2);
                let lo = l <= len_bound + 1e-9;
                let co = c <= cost_bound + 1e-9;
                ok_len |= lo;
                ok_cost |= co;
                ok_both |= lo && co;
            }
        }
        rep.length_violations += usize::from(!ok_len);
        rep.cost_violations += usize::from(!ok_cost);
        rep.joint_violations += usize::from(!ok_both);
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alt(v: usize) -> f64 {
        if v % 2 == 0 {
            1.0
        } else {
            0.0
        }
    }

    #[test]
    fn small_boundary_takes_everything() {
        let walk = [0, 1, 2, 3];
        let p = select_portals(&walk, 2);
        assert_eq!(p, vec![0, 1, 2, 3]);
        assert!(check_coverage(&walk, alt, &p, 2).holds(2));
    }

    #[test]
    fn sixty_vertex_cycle_with_theta_five() {
        let walk: Vec<usize> = (0..60).collect();
        let p = select_portals(&walk, 5);
        assert!(p.len() <= 15);
        // largest gap between consecutive portals, in hops
        let gaps: Vec<usize> = (0..p.len()).map(|i| (p[(i + 1) % p.len()] + 60 - p[i]) % 60).collect();
        assert!(gaps.iter().all(|&g| g as f64 <= 60.0 / 15.0));
        let rep = check_coverage(&walk, alt, &p, 5);
        assert_eq!(rep.joint_violations, 0);
        assert!(rep.holds(5));
    }

    #[test]
    fn missing_portals_are_reported() {
        let walk: Vec<usize> = (0..30).collect();
        let rep = check_coverage(&walk, alt, &[0], 3);
        assert!(rep.length_violations > 0);
        assert!(!rep.holds(3));
    }
}
