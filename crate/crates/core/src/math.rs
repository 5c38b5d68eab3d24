/// `x^k` for a non-negative integer exponent by repeated squaring.
#[inline]
pub(crate) fn powu(mut x: f64, mut k: u32) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= x;
        }
        x *= x;
        k >>= 1;
    }
    acc
}
