/// Fixed six-decimal rendering used by every CSV and summary line.
///
/// Rust float formatting is locale independent; negative zero is folded
/// into `0.000000` so identical values always print identically.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_owned()
    } else {
        s
    }
}
