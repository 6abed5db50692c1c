/// Merel's Heilbronn matrices for `T_n`: all `[[a, b], [c, d]]` with
/// `ad - bc = n`, `a > b >= 0`, `d > c >= 0`.
///
/// These satisfy `a + d <= n + 1`, which bounds the search.
pub fn merel(n: u64) -> Vec<[i64; 4]> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=(n + 1 - a) {
            let ad = a * d;
            for b in 0..a {
                if b == 0 {
                    if ad == n {
                        out.extend((0..d).map(|c| [a, 0, c, d]));
                    }
                } else {
                    let bc = ad - n;
                    if bc >= 0 && bc % b == 0 && bc / b < d {
                        out.push([a, b, bc / b, d]);
                    }
                }
            }
        }
    }
    out
}
