use fixedbitset::FixedBitSet;

/// Index of the lowest bit set in both `a` and `b`, scanning whole words.
pub(crate) fn first_common(a: &FixedBitSet, b: &FixedBitSet) -> Option<usize> {
    let bits = usize::BITS as usize;
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .enumerate()
        .find_map(|(i, (&x, &y))| {
            let w = x & y;
            (w != 0).then(|| i * bits + w.trailing_zeros() as usize)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_lowest_shared_bit() {
        let mut a = FixedBitSet::with_capacity(300);
        let mut b = FixedBitSet::with_capacity(300);
        assert_eq!(first_common(&a, &b), None);
        a.insert(5);
        a.insert(200);
        b.insert(200);
        b.insert(7);
        assert_eq!(first_common(&a, &b), Some(200));
        b.insert(5);
        assert_eq!(first_common(&a, &b), Some(5));
    }
}
