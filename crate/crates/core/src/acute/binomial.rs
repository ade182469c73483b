use crate::scalar::Real;

/// Two-sided exact binomial test of `k` successes in `n` trials against
/// p = 0.5: twice the smaller tail, capped at 1.
pub fn two_sided_binomial_p<T: Real>(k: usize, n: usize) -> T {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    if n == 0 {
        return T::one();
    }
    // ln(i!) for i in 0..=n
    let mut ln_fact = Vec::with_capacity(n + 1);
    ln_fact.push(T::zero());
    for i in 1..=n {
        let prev = ln_fact[i - 1];
        ln_fact.push(prev + T::from_count(i).ln());
    }
    let ln_half_n = T::from_count(n) * T::lit(0.5).ln();
    let pmf = |i: usize| (ln_fact[n] - ln_fact[i] - ln_fact[n - i] + ln_half_n).exp();
    let tail = if 2 * k <= n {
        (0..=k).map(pmf).fold(T::zero(), |a, b| a + b)
    } else {
        (k..=n).map(pmf).fold(T::zero(), |a, b| a + b)
    };
    (tail + tail).min(T::one())
}
