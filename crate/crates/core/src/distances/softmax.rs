/// `sm(u)_i = exp(u_i) / sum_k exp(u_k)`, a point of the positive `l1` sphere.
pub fn softmax(u: &[f64]) -> Vec<f64> {
    let m = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = u.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Sharp Lipschitz constant of softmax from `l2` to `l_inf`: `sqrt(2)/4`.
pub fn softmax_lipschitz_constant() -> f64 {
    std::f64::consts::SQRT_2 / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_limit() {
        assert_eq!(softmax(&[0.0; 4]), vec![0.25; 4]);
        let s = softmax(&[800.0, 0.0, 0.0]);
        assert!((s[0] - 1.0).abs() < 1e-300_f64.max(f64::EPSILON));
        assert!(s[1] < 1e-300);
    }

    #[test]
    fn sharpness_direction() {
        // two equal leading logits, third far below: the ratio approaches sqrt(2)/4
        let u = [0.0, 0.0, -60.0];
        let h = 1e-3;
        let v = [h / 2f64.sqrt(), -h / 2f64.sqrt(), -60.0];
        let (a, b) = (softmax(&u), softmax(&v));
        let num = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let ratio = num / h;
        assert!(ratio <= softmax_lipschitz_constant() + 1e-12);
        assert!(ratio >= softmax_lipschitz_constant() - 1e-6);
    }
}
