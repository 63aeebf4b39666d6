//! Standard monomials under a monomial ideal: counting and dimension.

/// Number of monomials not divisible by any of `leads`, or `None` when infinite.
pub fn count_standard(leads: &[Vec<u32>], nvars: usize) -> Option<u128> {
    let leads = minimalize(leads.to_vec());
    count_rec(&leads, nvars)
}

fn minimalize(mut leads: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    leads.sort();
    leads.dedup();
    let mut out: Vec<Vec<u32>> = Vec::new();
    // sort by total degree so divisors come first
    leads.sort_by_key(|l| l.iter().map(|&e| e as u64).sum::<u64>());
    for l in leads {
        if !out.iter().any(|d| d.iter().zip(l.iter()).all(|(a, b)| a <= b)) {
            out.push(l);
        }
    }
    out
}

fn count_rec(leads: &[Vec<u32>], nvars: usize) -> Option<u128> {
    if leads.iter().any(|l| l.iter().all(|&e| e == 0)) {
        return Some(0);
    }
    if nvars == 0 {
        return Some(1);
    }
    let mut points: Vec<u32> = leads.iter().map(|l| l[0]).collect();
    points.push(0);
    points.sort_unstable();
    points.dedup();
    let project = |bound: u32| -> Vec<Vec<u32>> {
        minimalize(
            leads
                .iter()
                .filter(|l| l[0] <= bound)
                .map(|l| l[1..].to_vec())
                .collect(),
        )
    };
    let mut total: u128 = 0;
    for w in points.windows(2) {
        let sub = count_rec(&project(w[0]), nvars - 1)?;
        total = total.checked_add(sub.checked_mul((w[1] - w[0]) as u128)?)?;
    }
    let last = *points.last().unwrap();
    match count_rec(&project(last), nvars - 1) {
        Some(0) => Some(total),
        _ => None,
    }
}

/// Krull dimension of `k[x]/(leads)`: the largest set of variables containing
/// the support of no lead. `None` for the unit ideal.
pub fn monomial_dimension(leads: &[Vec<u32>], nvars: usize) -> Option<usize> {
    if leads.iter().any(|l| l.iter().all(|&e| e == 0)) {
        return None;
    }
    let supports: Vec<u64> = leads
        .iter()
        .map(|l| {
            l.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |acc, (i, _)| acc | (1 << i))
        })
        .collect();
    assert!(nvars < 64, "too many variables for dimension search");
    let mut best = 0;
    for set in 0u64..(1u64 << nvars) {
        let size = set.count_ones() as usize;
        if size > best && supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_staircase() {
        assert_eq!(count_standard(&[vec![2, 0], vec![0, 3]], 2), Some(6));
        assert_eq!(count_standard(&[vec![1, 0], vec![0, 1]], 2), Some(1));
        assert_eq!(count_standard(&[vec![1, 0]], 2), None);
        assert_eq!(count_standard(&[], 0), Some(1));
        assert_eq!(count_standard(&[vec![0, 0]], 2), Some(0));
    }

    #[test]
    fn staircase_with_corner() {
        // (xy, x^81, y^81): 1 + 80 + 80
        assert_eq!(count_standard(&[vec![1, 1], vec![81, 0], vec![0, 81]], 2), Some(161));
        // brute force comparison on a random-looking ideal
        let leads = vec![vec![3, 0, 1], vec![0, 2, 0], vec![1, 1, 1], vec![4, 0, 0], vec![0, 0, 3]];
        let mut brute = 0;
        for a in 0..10u32 {
            for b in 0..10u32 {
                for c in 0..10u32 {
                    let m = [a, b, c];
                    if !leads.iter().any(|l| l.iter().zip(m.iter()).all(|(x, y)| x <= y)) {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(count_standard(&leads, 3), Some(brute));
    }

    #[test]
    fn dimensions() {
        assert_eq!(monomial_dimension(&[vec![1, 1]], 2), Some(1));
        assert_eq!(monomial_dimension(&[], 2), Some(2));
        assert_eq!(monomial_dimension(&[vec![1, 0], vec![0, 1]], 2), Some(0));
        assert_eq!(monomial_dimension(&[vec![0, 0]], 2), None);
    }
}
