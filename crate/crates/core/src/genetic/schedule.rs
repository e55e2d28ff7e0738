/// One step of the geometric mutation-rate schedule.
///
/// `1 - r` shrinks (or grows) by the constant factor
/// `g = ((1 - r_final) / (1 - r_initial))^(1/n)`, so `n` steps starting at
/// `r_initial` end exactly at `r_final`.
pub fn mutation_rate_update(r_current: f64, r_initial: f64, r_final: f64, n: usize) -> f64 {
    let g = step_factor(r_initial, r_final, n);
    1.0 - g * (1.0 - r_current)
}

pub fn step_factor(r_initial: f64, r_final: f64, n: usize) -> f64 {
    ((1.0 - r_final) / (1.0 - r_initial)).powf(1.0 / n as f64)
}
