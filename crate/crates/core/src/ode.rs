//! Fixed-step fourth-order Runge-Kutta integration for small autonomous
//! systems.

/// Advances `state` by one RK4 step of size `h` under the vector field
/// `field`.
pub fn rk4_step<const D: usize>(
    field: impl Fn(&[f64; D]) -> [f64; D],
    state: &[f64; D],
    h: f64,
) -> [f64; D] {
    let k1 = field(state);
    let k2 = field(&offset(state, &k1, 0.5 * h));
    let k3 = field(&offset(state, &k2, 0.5 * h));
    let k4 = field(&offset(state, &k3, h));
    core::array::from_fn(|i| state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

fn offset<const D: usize>(y: &[f64; D], k: &[f64; D], h: f64) -> [f64; D] {
    core::array::from_fn(|i| y[i] + h * k[i])
}
