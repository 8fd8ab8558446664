use std::collections::{BTreeSet, VecDeque};

use super::{Framework, Label, Labelling};
use crate::error::{Error, Result};

/// Largest framework accepted by [`enumerate`].
pub const DEFAULT_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemanticsKind {
    Admissible,
    Complete,
    Preferred,
}

/// Least fixed point labelling.
///
/// An argument becomes `in` once all its attackers are `out` and `out` once
/// it has an `in` attacker; whatever is left is `undec`. Each argument is
/// labelled at most once, so this runs in `O(|Ar| + |R|)`.
pub fn grounded_labelling(af: &Framework) -> Labelling {
    let n = af.len();
    let mut labels = vec![Label::Undec; n];
    let mut pending: Vec<usize> = (0..n).map(|a| af.attackers_slice(a).len()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&a| pending[a] == 0).collect();
    while let Some(a) = queue.pop_front() {
        if labels[a] != Label::Undec {
            continue;
        }
        labels[a] = Label::In;
        for &b in af.targets_slice(a) {
            if labels[b] != Label::Undec {
                continue;
            }
            labels[b] = Label::Out;
            for &c in af.targets_slice(b) {
                pending[c] -= 1;
                if pending[c] == 0 && labels[c] == Label::Undec {
                    queue.push_back(c);
                }
            }
        }
    }
    Labelling(labels)
}

/// Out iff some attacker is in; in iff every attacker is out.
pub fn is_reinstatement(af: &Framework, lab: &Labelling) -> bool {
    if lab.0.len() != af.len() {
        return false;
    }
    (0..af.len()).all(|a| {
        let attackers = af.attackers_slice(a);
        let out = attackers.iter().any(|&b| lab.get(b) == Label::In);
        let inn = attackers.iter().all(|&b| lab.get(b) == Label::Out);
        (lab.get(a) == Label::Out) == out && (lab.get(a) == Label::In) == inn
    })
}

/// Brute-force enumeration of extensions over all subsets.
pub fn enumerate(af: &Framework, kind: SemanticsKind, cap: usize) -> Result<Vec<BTreeSet<usize>>> {
    let n = af.len();
    if n > cap || n > 30 {
        return Err(Error::CapExceeded { size: n, cap });
    }
    let target_mask: Vec<u32> = (0..n)
        .map(|a| af.targets_slice(a).iter().fold(0, |m, &b| m | 1 << b))
        .collect();
    let attacker_mask: Vec<u32> = (0..n)
        .map(|a| af.attackers_slice(a).iter().fold(0, |m, &b| m | 1 << b))
        .collect();
    let members = |s: u32| (0..n).filter(move |&a| s & (1 << a) != 0);
    let defended = |s: u32| {
        let hit = members(s).fold(0u32, |m, a| m | target_mask[a]);
        (0..n)
            .filter(|&a| attacker_mask[a] & !hit == 0)
            .fold(0u32, |m, a| m | 1 << a)
    };
    let conflict_free = |s: u32| members(s).all(|a| target_mask[a] & s == 0);

    let mut admissible = Vec::new();
    let mut complete = Vec::new();
    for s in 0..(1u32 << n) {
        if !conflict_free(s) {
            continue;
        }
        let f = defended(s);
        if s & !f == 0 {
            admissible.push(s);
            if s == f {
                complete.push(s);
            }
        }
    }
    let chosen: Vec<u32> = match kind {
        SemanticsKind::Admissible => admissible,
        SemanticsKind::Complete => complete,
        SemanticsKind::Preferred => complete
            .iter()
            .copied()
            .filter(|&s| !complete.iter().any(|&t| t != s && t & s == s))
            .collect(),
    };
    Ok(chosen.into_iter().map(|s| members(s).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn chain_is_forced() {
        let af = Framework::new(3, [(0, 1), (1, 2)]).unwrap();
        let lab = grounded_labelling(&af);
        assert_eq!(lab.in_set(), set(&[0, 2]));
        assert_eq!(lab.out_set(), set(&[1]));
        assert!(lab.undec_set().is_empty());
    }

    #[test]
    fn mutual_attack_is_undecided() {
        let af = Framework::new(2, [(0, 1), (1, 0)]).unwrap();
        let lab = grounded_labelling(&af);
        assert_eq!(lab.undec_set(), set(&[0, 1]));
        let preferred = enumerate(&af, SemanticsKind::Preferred, DEFAULT_CAP).unwrap();
        assert_eq!(preferred, vec![set(&[0]), set(&[1])]);
    }

    #[test]
    fn self_attack_is_undecided() {
        let af = Framework::new(2, [(0, 0), (0, 1)]).unwrap();
        let lab = grounded_labelling(&af);
        assert_eq!(lab.undec_set(), set(&[0, 1]));
        assert!(is_reinstatement(&af, &lab));
    }

    #[test]
    fn empty_framework_has_only_the_empty_extension() {
        let af = Framework::new(0, []).unwrap();
        for kind in [
            SemanticsKind::Admissible,
            SemanticsKind::Complete,
            SemanticsKind::Preferred,
        ] {
            assert_eq!(enumerate(&af, kind, DEFAULT_CAP).unwrap(), vec![set(&[])]);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let af = Framework::new(17, []).unwrap();
        assert!(matches!(
            enumerate(&af, SemanticsKind::Admissible, DEFAULT_CAP),
            Err(Error::CapExceeded { size: 17, cap: 16 })
        ));
    }

    #[test]
    fn reinstatement_checks() {
        let free = Framework::new(2, []).unwrap();
        assert!(is_reinstatement(
            &free,
            &Labelling(vec![Label::In, Label::In])
        ));
        let af = Framework::new(2, [(0, 1)]).unwrap();
        assert!(!is_reinstatement(
            &af,
            &Labelling(vec![Label::In, Label::In])
        ));
        assert!(is_reinstatement(
            &af,
            &Labelling(vec![Label::In, Label::Out])
        ));
    }
}
