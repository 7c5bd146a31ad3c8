use serde::{Deserialize, Serialize};

use crate::Scalar;

/// Tolerance on the normalized doubled triangle area below which a triple is
/// treated as collinear.
pub const DEFAULT_COLLINEAR_TOL: f64 = 1e-9;

/// A point in the deployment plane, in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Position<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Position<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn sub(self, other: Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn cast<U: Scalar>(self) -> Position<U> {
        Position::new(U::of(self.x.as_f64()), U::of(self.y.as_f64()))
    }
}

pub fn distance<T: Scalar>(a: Position<T>, b: Position<T>) -> T {
    b.sub(a).norm()
}

/// `|cross(b-a, c-a)| < tol * max(1, |b-a| |c-a|)`, evaluated with `a` taken
/// as the vertex shared by the two longest sides so that the answer does not
/// depend on the argument order.
pub fn is_collinear<T: Scalar>(a: Position<T>, b: Position<T>, c: Position<T>, tol: T) -> bool {
    let (ab, bc, ca) = (distance(a, b), distance(b, c), distance(c, a));
    // The shortest side is opposite the pivot.
    let (pivot, p, q) = if bc <= ab && bc <= ca {
        (a, b, c)
    } else if ca <= ab && ca <= bc {
        (b, c, a)
    } else {
        (c, a, b)
    };
    let u = p.sub(pivot);
    let v = q.sub(pivot);
    let scale = (u.norm() * v.norm()).max(T::one());
    u.cross(v).abs() < tol * scale
}

/// True when every point lies on one line (fewer than three points are
/// trivially collinear).
pub fn points_collinear<T: Scalar>(points: &[Position<T>], tol: T) -> bool {
    if points.len() < 3 {
        return true;
    }
    // Pivot on the first point and the point farthest from it.
    let a = points[0];
    let b = points
        .iter()
        .copied()
        .max_by(|p, q| {
            distance(a, *p)
                .partial_cmp(&distance(a, *q))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(a);
    if distance(a, b) == T::zero() {
        return true;
    }
    points.iter().all(|&c| is_collinear(a, b, c, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Position {
        Position::new(x, y)
    }

    #[test]
    fn exact_line_is_collinear() {
        assert!(is_collinear(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0), 1e-9));
    }

    #[test]
    fn right_angle_is_not_collinear() {
        assert!(!is_collinear(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0), 1e-9));
    }

    #[test]
    fn nearly_flat_triple_is_collinear() {
        // |cross| = 10 * 1e-12 = 1e-11; scale = 10 * sqrt(400 + 1e-24) = 200;
        // 1e-11 < 1e-9 * 200.
        let (a, b, c) = (p(0.0, 0.0), p(10.0, 0.0), p(20.0, 1e-12));
        let area = b.sub(a).cross(c.sub(a)).abs();
        assert!((area - 1e-11).abs() < 1e-20);
        assert!(is_collinear(a, b, c, 1e-9));
        assert!(!is_collinear(a, b, p(20.0, 1e-3), 1e-9));
    }

    #[test]
    fn collinearity_in_f32() {
        let a = Position::<f32>::new(0.0, 0.0);
        let b = Position::<f32>::new(3.0, 1.0);
        assert!(is_collinear(a, b, Position::new(6.0, 2.0), 1e-6));
        assert!(!is_collinear(a, b, Position::new(6.0, 3.0), 1e-6));
    }

    #[test]
    fn point_sets() {
        assert!(points_collinear(&[p(0.0, 0.0), p(1.0, 1.0), p(5.0, 5.0), p(-2.0, -2.0)], 1e-9));
        assert!(!points_collinear(&[p(0.0, 0.0), p(1.0, 1.0), p(5.0, 5.0), p(-2.0, 2.0)], 1e-9));
        assert!(points_collinear(&[p(1.0, 1.0), p(1.0, 1.0), p(1.0, 1.0)], 1e-9));
    }
}
