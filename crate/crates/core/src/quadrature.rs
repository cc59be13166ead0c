//! Fixed-order composite Simpson quadrature on rectangles.

/// Nodes and weights of the composite Simpson rule on `[a, b]` with
/// `panels` Simpson panels (`2 * panels` subintervals).
pub fn simpson_nodes(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(panels >= 1, "at least one Simpson panel is required");
    let n = 2 * panels;
    let h = (b - a) / n as f64;
    let mut nodes = Vec::with_capacity(n + 1);
    let mut weights = Vec::with_capacity(n + 1);
    for i in 0..=n {
        nodes.push(if i == n { b } else { a + i as f64 * h });
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        weights.push(w * h / 3.0);
    }
    (nodes, weights)
}

/// Integrates `f(x, y)` over `[x0, x1] x [y0, y1]` with the tensor-product
/// composite Simpson rule, `panels` panels per axis.
pub fn simpson_2d(f: impl Fn(f64, f64) -> f64, x0: f64, x1: f64, y0: f64, y1: f64, panels: usize) -> f64 {
    let (xs, wx) = simpson_nodes(x0, x1, panels);
    let (ys, wy) = simpson_nodes(y0, y1, panels);
    let mut total = 0.0;
    for (&y, &wyj) in ys.iter().zip(&wy) {
        let mut row = 0.0;
        for (&x, &wxi) in xs.iter().zip(&wx) {
            row += wxi * f(x, y);
        }
        total += wyj * row;
    }
    total
}
