//! Representability by the two binary quadratic forms that govern Euclidean
//! orbifold self-covers.

use num_integer::Roots;

/// `n = x² + xy + y²` for some integers `x, y` not both zero.
pub fn is_loeschian(n: u64) -> bool {
    let r = n.sqrt();
    (0..=r).any(|x| (0..=x).any(|y| x * x + x * y + y * y == n && n > 0))
}

/// `n = x² + y²` for some integers `x, y` not both zero.
pub fn is_two_square(n: u64) -> bool {
    let r = n.sqrt();
    (0..=r).any(|x| (0..=x).any(|y| x * x + y * y == n && n > 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert!(is_loeschian(7));
        assert!(is_loeschian(49));
        assert!(is_loeschian(1));
        assert!(!is_loeschian(2));
        assert!(!is_loeschian(0));
        assert!(!is_two_square(3));
        assert!(is_two_square(25));
    }

    #[test]
    fn lists_up_to_nine() {
        let l: Vec<u64> = (1..=9).filter(|&n| is_loeschian(n)).collect();
        assert_eq!(l, vec![1, 3, 4, 7, 9]);
        let t: Vec<u64> = (1..=9).filter(|&n| is_two_square(n)).collect();
        assert_eq!(t, vec![1, 2, 4, 5, 8, 9]);
    }
}
