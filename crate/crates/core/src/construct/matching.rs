//! Stable marriage: the classic proposal algorithm, used as an oracle against
//! the 2-stable networks of the marriage-encoded game instances.

use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Complete strict preference lists for n men and n women. `men[m]` lists the
/// women in m's order of preference (most preferred first), `women[w]`
/// likewise lists the men.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceProfile {
    men: Vec<Vec<usize>>,
    women: Vec<Vec<usize>>,
}

impl PreferenceProfile {
    pub fn new(men: Vec<Vec<usize>>, women: Vec<Vec<usize>>) -> Result<PreferenceProfile> {
        let n = men.len();
        if women.len() != n {
            return Err(Error::BadPreferences(
                "men and women lists differ in length".into(),
            ));
        }
        for (who, lists) in [("man", &men), ("woman", &women)] {
            for (i, list) in lists.iter().enumerate() {
                let mut seen = vec![false; n];
                if list.len() != n {
                    return Err(Error::BadPreferences(format!(
                        "{who} {i} ranks {} partners, expected {n}",
                        list.len()
                    )));
                }
                for &p in list {
                    if p >= n || seen[p] {
                        return Err(Error::BadPreferences(format!(
                            "{who} {i} has an invalid or repeated entry {p}"
                        )));
                    }
                    seen[p] = true;
                }
            }
        }
        Ok(PreferenceProfile { men, women })
    }

    pub fn random(n: usize, seed: u64) -> PreferenceProfile {
        let mut rng = SplitMix64::new(seed);
        let side = |rng: &mut SplitMix64| -> Vec<Vec<usize>> {
            (0..n)
                .map(|_| {
                    let mut list: Vec<usize> = (0..n).collect();
                    rng.shuffle(&mut list);
                    list
                })
                .collect()
        };
        let men = side(&mut rng);
        let women = side(&mut rng);
        PreferenceProfile { men, women }
    }

    pub fn n(&self) -> usize {
        self.men.len()
    }

    pub fn men(&self) -> &[Vec<usize>] {
        &self.men
    }

    pub fn women(&self) -> &[Vec<usize>] {
        &self.women
    }

    /// 1-based rank of woman `w` in man `m`'s list.
    pub fn man_rank(&self, m: usize, w: usize) -> usize {
        self.men[m].iter().position(|&x| x == w).unwrap() + 1
    }

    /// 1-based rank of man `m` in woman `w`'s list.
    pub fn woman_rank(&self, w: usize, m: usize) -> usize {
        self.women[w].iter().position(|&x| x == m).unwrap() + 1
    }
}

/// A perfect matching; `pairs[m]` is the woman matched to man `m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Matching {
    pub pairs: Vec<usize>,
}

/// Man-proposing deferred acceptance; returns the man-optimal stable
/// matching.
pub fn gale_shapley(profile: &PreferenceProfile) -> Matching {
    let n = profile.n();
    let mut next_choice = vec![0usize; n];
    let mut fiance: Vec<Option<usize>> = vec![None; n]; // per woman
    let mut wife: Vec<Option<usize>> = vec![None; n]; // per man
    let mut free: Vec<usize> = (0..n).rev().collect();

    // O(1) "does w prefer a to b" lookups.
    let mut woman_rank = vec![vec![0usize; n]; n];
    for (w, prefs) in profile.women.iter().enumerate() {
        for (rank, &m) in prefs.iter().enumerate() {
            woman_rank[w][m] = rank;
        }
    }

    while let Some(m) = free.pop() {
        let w = profile.men[m][next_choice[m]];
        next_choice[m] += 1;
        match fiance[w] {
            None => {
                fiance[w] = Some(m);
                wife[m] = Some(w);
            }
            Some(current) => {
                if woman_rank[w][m] < woman_rank[w][current] {
                    fiance[w] = Some(m);
                    wife[m] = Some(w);
                    wife[current] = None;
                    free.push(current);
                } else {
                    free.push(m);
                }
            }
        }
    }

    Matching {
        pairs: wife.into_iter().map(|w| w.unwrap()).collect(),
    }
}

/// A man and a woman not matched to each other who both strictly prefer each
/// other to their assigned partners.
pub fn has_blocking_pair(profile: &PreferenceProfile, matching: &Matching) -> bool {
    let n = profile.n();
    let mut husband = vec![0usize; n];
    for (m, &w) in matching.pairs.iter().enumerate() {
        husband[w] = m;
    }
    for (m, &wife) in matching.pairs.iter().enumerate() {
        for (w, &hub) in husband.iter().enumerate() {
            if wife == w {
                continue;
            }
            let m_prefers = profile.man_rank(m, w) < profile.man_rank(m, wife);
            let w_prefers = profile.woman_rank(w, m) < profile.woman_rank(w, hub);
            if m_prefers && w_prefers {
                return true;
            }
        }
    }
    false
}

/// Every stable matching, by brute force over all perfect matchings. The
/// independent reference the game-theoretic encodings are checked against.
pub fn brute_force_stable_matchings(profile: &PreferenceProfile) -> Vec<Matching> {
    let n = profile.n();
    let mut out = Vec::new();
    let mut assignment = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        profile: &PreferenceProfile,
        n: usize,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Matching>,
    ) {
        if assignment.len() == n {
            let m = Matching {
                pairs: assignment.clone(),
            };
            if !has_blocking_pair(profile, &m) {
                out.push(m);
            }
            return;
        }
        for w in 0..n {
            if !used[w] {
                used[w] = true;
                assignment.push(w);
                rec(profile, n, assignment, used, out);
                assignment.pop();
                used[w] = false;
            }
        }
    }
    rec(profile, n, &mut assignment, &mut used, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair() {
        let p = PreferenceProfile::new(vec![vec![0]], vec![vec![0]]).unwrap();
        assert_eq!(gale_shapley(&p).pairs, vec![0]);
    }

    #[test]
    fn forced_matching_with_identical_tops() {
        // Both men rank w0 first, both women rank m0 first: m0 gets w0 and
        // the leftovers pair up.
        let p = PreferenceProfile::new(
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(gale_shapley(&p).pairs, vec![0, 1]);
    }

    #[test]
    fn output_has_no_blocking_pair_on_random_profiles() {
        for seed in 0..30 {
            let p = PreferenceProfile::random(3, seed);
            let m = gale_shapley(&p);
            assert!(!has_blocking_pair(&p, &m), "seed {seed}");
            assert!(brute_force_stable_matchings(&p).contains(&m));
        }
    }

    #[test]
    fn brute_force_finds_all_stable_matchings() {
        // A profile with two stable matchings: everyone prefers a different
        // partner, classic 2x2 crossed preferences.
        let p = PreferenceProfile::new(
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![1, 0], vec![0, 1]],
        )
        .unwrap();
        let all = brute_force_stable_matchings(&p);
        assert_eq!(all.len(), 2);
        // Man-proposing yields the man-optimal one.
        assert_eq!(gale_shapley(&p).pairs, vec![0, 1]);
    }

    #[test]
    fn malformed_preferences_rejected() {
        assert!(PreferenceProfile::new(vec![vec![0, 0]], vec![vec![0]]).is_err());
        assert!(PreferenceProfile::new(vec![vec![0]], vec![]).is_err());
    }
}
