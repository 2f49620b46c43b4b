use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{ElemSet, Matroid};
use crate::label::Label;
use crate::spike::SpikeDescriptor;

/// Searches bijections that send tip to tip and legs to legs (every leg
/// permutation, every within-leg swap) for one carrying the circuits of `a`
/// onto those of `b`.
///
/// Candidates are screened by the image of the transversal family, encoded
/// as one bit per leg; a surviving candidate is confirmed on the full
/// circuit family.
pub fn spike_isomorphic(
    a: &Matroid,
    b: &Matroid,
    desc_a: &SpikeDescriptor,
    desc_b: &SpikeDescriptor,
) -> Option<BTreeMap<Label, Label>> {
    if desc_a.rank != desc_b.rank
        || a.len() != b.len()
        || a.circuits().len() != b.circuits().len()
        || desc_a.transversal_circuits.len() != desc_b.transversal_circuits.len()
    {
        return None;
    }
    let ra = desc_a.resolve(a.ground()).ok()?;
    let rb = desc_b.resolve(b.ground()).ok()?;
    let r = ra.legs.len();
    if r != rb.legs.len() || r > 16 {
        return None;
    }
    let code = |legs: &[(usize, usize)], c: ElemSet| -> u32 {
        legs.iter()
            .enumerate()
            .filter(|(_, &(_, y))| c.contains(y))
            .fold(0, |acc, (i, _)| acc | (1 << i))
    };
    let codes_a: Vec<u32> = ra.transversals.iter().map(|&c| code(&ra.legs, c)).collect();
    let mut codes_b: Vec<u32> = rb.transversals.iter().map(|&c| code(&rb.legs, c)).collect();
    codes_b.sort_unstable();

    let mut perm: Vec<usize> = (0..r).collect();
    let mut image = Vec::with_capacity(codes_a.len());
    let mut found = None;
    for_each_permutation(&mut perm, &mut |perm| {
        for flips in 0u32..(1 << r) {
            image.clear();
            image.extend(
                codes_a.iter().map(|&c| {
                    (0..r).fold(0u32, |acc, i| acc | (((c >> i) & 1) << perm[i])) ^ flips
                }),
            );
            image.sort_unstable();
            if image != codes_b {
                continue;
            }
            let mut map = alloc::vec![0usize; a.len()];
            map[ra.tip] = rb.tip;
            for (i, &(x, y)) in ra.legs.iter().enumerate() {
                let (tx, ty) = rb.legs[perm[i]];
                let (tx, ty) = if (flips >> perm[i]) & 1 == 1 {
                    (ty, tx)
                } else {
                    (tx, ty)
                };
                map[x] = tx;
                map[y] = ty;
            }
            let mapped = a
                .circuits()
                .map(|c| ElemSet::from_indices(c.iter().map(|e| map[e])));
            if mapped == *b.circuits() {
                found = Some(
                    (0..a.len())
                        .map(|e| {
                            (
                                a.ground().label(e).clone(),
                                b.ground().label(map[e]).clone(),
                            )
                        })
                        .collect(),
                );
                return true;
            }
        }
        false
    });
    found
}

/// Heap's algorithm; stops once `visit` returns true.
fn for_each_permutation(items: &mut [usize], visit: &mut impl FnMut(&[usize]) -> bool) {
    let n = items.len();
    let mut c = alloc::vec![0usize; n];
    if visit(items) {
        return;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            if visit(items) {
                return;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
