//! Fragment types and the single-split rules.
//!
//! Only side lengths are tracked; fragments carry no position inside the
//! initial domain. Split functions are pure: children inherit the parent's
//! `birth_time` and the engine restamps them according to its scheduler.

use core::fmt;
use core::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::math::sqrt;

/// Direction of a created interface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Horizontal,
    Vertical,
    /// Plate orthogonal to the first axis (divides side `a`).
    Axis1,
    Axis2,
    /// Plate orthogonal to the third axis; its area is `a * b`.
    Axis3,
    Diagonal,
}

impl Orientation {
    pub const fn as_str(self) -> &'static str {
        match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
            Orientation::Axis1 => "axis1",
            Orientation::Axis2 => "axis2",
            Orientation::Axis3 => "axis3",
            Orientation::Diagonal => "diagonal",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "horizontal" => Orientation::Horizontal,
            "vertical" => Orientation::Vertical,
            "axis1" => Orientation::Axis1,
            "axis2" => Orientation::Axis2,
            "axis3" => Orientation::Axis3,
            "diagonal" => Orientation::Diagonal,
            other => return Err(domain!("unknown orientation {other:?}")),
        })
    }
}

/// One interface created by a split.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceRecord {
    pub orientation: Orientation,
    /// Length in 2D, area in 3D.
    pub size: f64,
    pub birth_time: f64,
    pub realization: u64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fragment2D {
    /// Horizontal side.
    pub a: f64,
    /// Vertical side.
    pub b: f64,
    pub birth_time: f64,
    pub generation: u32,
}

impl Fragment2D {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            birth_time: 0.0,
            generation: 0,
        }
    }

    pub fn unit() -> Self {
        Self::new(1.0, 1.0)
    }

    pub fn area(&self) -> f64 {
        self.a * self.b
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fragment3D {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub birth_time: f64,
    pub generation: u32,
}

impl Fragment3D {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self {
            a,
            b,
            c,
            birth_time: 0.0,
            generation: 0,
        }
    }

    pub fn unit() -> Self {
        Self::new(1.0, 1.0, 1.0)
    }

    pub fn volume(&self) -> f64 {
        self.a * self.b * self.c
    }

    /// Area of the face orthogonal to the third axis.
    pub fn horizontal_area(&self) -> f64 {
        self.a * self.b
    }
}

/// Right triangle given by its horizontal leg `a` and vertical leg `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleFragment {
    pub a: f64,
    pub b: f64,
    pub birth_time: f64,
    pub generation: u32,
}

impl TriangleFragment {
    pub fn new(a: f64, b: f64) -> Self {
        Self {
            a,
            b,
            birth_time: 0.0,
            generation: 0,
        }
    }

    pub fn unit() -> Self {
        Self::new(1.0, 1.0)
    }

    pub fn area(&self) -> f64 {
        0.5 * self.a * self.b
    }
}

/// Which of the two mirror-image cuts splits a triangle.
///
/// With the right angle at the origin, cut `A` draws the vertical segment
/// at `x = a(1 - u)` up to the hypotenuse, the horizontal segment from
/// there back to the vertical leg, and the diagonal of the resulting
/// rectangle. Children are `(au, bu)`, `(a(1-u), bu)` twice and
/// `(a(1-u), b(1-u))`. Cut `B` is the same construction with `u` and
/// `1 - u` exchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleCut {
    A,
    B,
}

fn check_fraction(u: f64) -> Result<()> {
    if u > 0.0 && u < 1.0 {
        Ok(())
    } else {
        Err(domain!("split fraction must lie in (0, 1), got {u}"))
    }
}

fn iface(orientation: Orientation, size: f64, birth_time: f64) -> InterfaceRecord {
    InterfaceRecord {
        orientation,
        size,
        birth_time,
        realization: 0,
    }
}

/// Split a rectangle with a horizontal or vertical interface at fraction `u`.
pub fn split_rectangle(
    f: &Fragment2D,
    u: f64,
    orientation: Orientation,
) -> Result<(Fragment2D, Fragment2D, InterfaceRecord)> {
    check_fraction(u)?;
    let child = |a, b| Fragment2D {
        a,
        b,
        birth_time: f.birth_time,
        generation: f.generation + 1,
    };
    match orientation {
        Orientation::Horizontal => Ok((
            child(f.a, f.b * u),
            child(f.a, f.b * (1.0 - u)),
            iface(Orientation::Horizontal, f.a, f.birth_time),
        )),
        Orientation::Vertical => Ok((
            child(f.a * u, f.b),
            child(f.a * (1.0 - u), f.b),
            iface(Orientation::Vertical, f.b, f.birth_time),
        )),
        other => Err(domain!("rectangles split horizontally or vertically, not {other}")),
    }
}

/// Split a cuboid with a plate orthogonal to `axis` at fraction `u`.
pub fn split_cuboid(
    f: &Fragment3D,
    u: f64,
    axis: Orientation,
) -> Result<(Fragment3D, Fragment3D, InterfaceRecord)> {
    check_fraction(u)?;
    let child = |a, b, c| Fragment3D {
        a,
        b,
        c,
        birth_time: f.birth_time,
        generation: f.generation + 1,
    };
    match axis {
        Orientation::Axis1 => Ok((
            child(f.a * u, f.b, f.c),
            child(f.a * (1.0 - u), f.b, f.c),
            iface(Orientation::Axis1, f.b * f.c, f.birth_time),
        )),
        Orientation::Axis2 => Ok((
            child(f.a, f.b * u, f.c),
            child(f.a, f.b * (1.0 - u), f.c),
            iface(Orientation::Axis2, f.a * f.c, f.birth_time),
        )),
        Orientation::Axis3 => Ok((
            child(f.a, f.b, f.c * u),
            child(f.a, f.b, f.c * (1.0 - u)),
            iface(Orientation::Axis3, f.a * f.b, f.birth_time),
        )),
        other => Err(domain!("cuboids split along axis1..axis3, not {other}")),
    }
}

/// Split a right triangle into four right triangles and three interfaces.
///
/// Interfaces are reported as vertical, horizontal and diagonal, in that
/// order. For cut `A` their sizes are `b u`, `a (1 - u)` and
/// `sqrt((a(1-u))^2 + (b u)^2)`.
pub fn split_triangle(
    f: &TriangleFragment,
    u: f64,
    cut: TriangleCut,
) -> Result<([TriangleFragment; 4], [InterfaceRecord; 3])> {
    check_fraction(u)?;
    // cut B is cut A with the fraction mirrored
    let s = match cut {
        TriangleCut::A => u,
        TriangleCut::B => 1.0 - u,
    };
    let r = 1.0 - s;
    let child = |a, b| TriangleFragment {
        a,
        b,
        birth_time: f.birth_time,
        generation: f.generation + 1,
    };
    let children = [
        child(f.a * s, f.b * s),
        child(f.a * r, f.b * s),
        child(f.a * r, f.b * s),
        child(f.a * r, f.b * r),
    ];
    let (vertical, horizontal) = (f.b * s, f.a * r);
    let ifaces = [
        iface(Orientation::Vertical, vertical, f.birth_time),
        iface(Orientation::Horizontal, horizontal, f.birth_time),
        iface(
            Orientation::Diagonal,
            sqrt(horizontal * horizontal + vertical * vertical),
            f.birth_time,
        ),
    ];
    Ok((children, ifaces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn rectangle_examples() {
        let (c1, c2, i) = split_rectangle(&Fragment2D::unit(), 0.3, Orientation::Horizontal).unwrap();
        assert_eq!((c1.a, c1.b), (1.0, 0.3));
        assert_eq!(c2.a, 1.0);
        assert!((c2.b - 0.7).abs() < 1e-15);
        assert_eq!(i.size, 1.0);
        assert_eq!(i.orientation, Orientation::Horizontal);
        assert_eq!(c1.generation, 1);

        let f = Fragment2D::new(0.5, 0.8);
        let (c1, c2, i) = split_rectangle(&f, 0.25, Orientation::Vertical).unwrap();
        assert_eq!((c1.a, c1.b), (0.125, 0.8));
        assert_eq!((c2.a, c2.b), (0.375, 0.8));
        assert_eq!(i.size, 0.8);
    }

    #[test]
    fn cuboid_examples() {
        let (c1, c2, i) = split_cuboid(&Fragment3D::unit(), 0.5, Orientation::Axis3).unwrap();
        assert_eq!((c1.a, c1.b, c1.c), (1.0, 1.0, 0.5));
        assert_eq!((c2.a, c2.b, c2.c), (1.0, 1.0, 0.5));
        assert_eq!(i.size, 1.0);

        let f = Fragment3D::new(0.5, 0.4, 1.0);
        let (c1, c2, i) = split_cuboid(&f, 0.2, Orientation::Axis1).unwrap();
        assert_eq!((c1.a, c1.b, c1.c), (0.1, 0.4, 1.0));
        assert_eq!((c2.a, c2.b, c2.c), (0.4, 0.4, 1.0));
        assert_eq!(i.size, 0.4);
    }

    #[test]
    fn triangle_examples() {
        let (_, ifaces) = split_triangle(&TriangleFragment::unit(), 0.4, TriangleCut::A).unwrap();
        assert!((ifaces[0].size - 0.4).abs() < 1e-15);
        assert!((ifaces[1].size - 0.6).abs() < 1e-15);
        assert!((ifaces[2].size - libm::sqrt(0.52)).abs() < 1e-15);

        let f = TriangleFragment::new(0.5, 1.0);
        for cut in [TriangleCut::A, TriangleCut::B] {
            let (children, _) = split_triangle(&f, 0.5, cut).unwrap();
            for c in children {
                assert_eq!((c.a, c.b), (0.25, 0.5));
            }
        }
    }

    #[test]
    fn triangle_cut_b_mirrors_a() {
        let f = TriangleFragment::new(0.7, 0.3);
        let (ca, ia) = split_triangle(&f, 0.2, TriangleCut::A).unwrap();
        let (cb, ib) = split_triangle(&f, 0.8, TriangleCut::B).unwrap();
        // 1 - 0.8 is not exactly 0.2
        for (x, y) in ca.iter().zip(&cb) {
            assert!((x.a - y.a).abs() < 1e-15 && (x.b - y.b).abs() < 1e-15);
        }
        for (x, y) in ia.iter().zip(&ib) {
            assert_eq!(x.orientation, y.orientation);
            assert!((x.size - y.size).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_inputs() {
        let f = Fragment2D::unit();
        assert!(split_rectangle(&f, 0.0, Orientation::Horizontal).is_err());
        assert!(split_rectangle(&f, 1.0, Orientation::Vertical).is_err());
        assert!(split_rectangle(&f, 0.5, Orientation::Axis3).is_err());
        assert!(split_cuboid(&Fragment3D::unit(), 0.5, Orientation::Horizontal).is_err());
        assert!(split_triangle(&TriangleFragment::unit(), 1.5, TriangleCut::A).is_err());
        assert!("sideways".parse::<Orientation>().is_err());
        assert_eq!("axis3".parse::<Orientation>().unwrap(), Orientation::Axis3);
    }

    proptest! {
        #[test]
        fn rectangle_conserves_area(a in 1e-6..1.0f64, b in 1e-6..1.0f64, u in 1e-9..(1.0 - 1e-9), h: bool) {
            let f = Fragment2D::new(a, b);
            let o = if h { Orientation::Horizontal } else { Orientation::Vertical };
            let (c1, c2, i) = split_rectangle(&f, u, o).unwrap();
            prop_assert!(rel(c1.area() + c2.area(), f.area()) <= 1e-12);
            prop_assert_eq!(i.size, if h { a } else { b });
            prop_assert!(c1.a > 0.0 && c1.b > 0.0 && c2.a > 0.0 && c2.b > 0.0);
        }

        #[test]
        fn cuboid_conserves_volume(a in 1e-4..1.0f64, b in 1e-4..1.0f64, c in 1e-4..1.0f64,
                                   u in 1e-9..(1.0 - 1e-9), k in 0usize..3) {
            let f = Fragment3D::new(a, b, c);
            let axis = [Orientation::Axis1, Orientation::Axis2, Orientation::Axis3][k];
            let (c1, c2, i) = split_cuboid(&f, u, axis).unwrap();
            prop_assert!(rel(c1.volume() + c2.volume(), f.volume()) <= 1e-12);
            let plate = [b * c, a * c, a * b][k];
            prop_assert_eq!(i.size, plate);
        }

        #[test]
        fn triangle_conserves_area(a in 1e-6..1.0f64, b in 1e-6..1.0f64, u in 1e-9..(1.0 - 1e-9), ab: bool) {
            let f = TriangleFragment::new(a, b);
            let cut = if ab { TriangleCut::A } else { TriangleCut::B };
            let (children, ifaces) = split_triangle(&f, u, cut).unwrap();
            let total: f64 = children.iter().map(|c| c.area()).sum();
            prop_assert!(rel(total, f.area()) <= 1e-12);
            prop_assert!(ifaces.iter().all(|i| i.size > 0.0));
        }
    }
}
