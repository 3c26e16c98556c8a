//! Numerical radius from the smallest singular value of the feasibility map.
use endonet::inner_fn::InnerFunctionSpec;
use endonet::witness::radius_estimate;

fn main() {
    let nu = 0.5;
    let grid: Vec<f64> = (1..=20).map(|k| k as f64 * nu / 10.0).collect();
    let res = radius_estimate(&InnerFunctionSpec::sin_ratio(nu, 1.0, 64), &grid, 256).unwrap();
    for (r, s) in res.rows() {
        let mark = if s < res.threshold { "  below threshold" } else { "" };
        println!("r = {r:.3}  sigma_min = {s:.3e}{mark}");
    }
    println!("estimated radius {:?} (exact {nu})", res.estimated_radius);
}
