//! Planar polygon utilities: signed area, convex clipping, segment intersection.

pub type Vec2 = [f64; 2];

/// Signed shoelace area (positive for counterclockwise loops).
pub fn polygon_area(v: &[Vec2]) -> f64 {
    let n = v.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        acc += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * acc
}

fn side(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
}

fn line_cut(p: Vec2, q: Vec2, sp: f64, sq: f64) -> Vec2 {
    let t = sp / (sp - sq);
    [p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]
}

/// Sutherland–Hodgman clip of `subject` against a counterclockwise convex polygon.
/// The result may contain degenerate bridges when the subject is concave; its signed
/// area is still exact.
pub fn clip_convex(subject: &[Vec2], clip: &[Vec2]) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = subject.to_vec();
    let m = clip.len();
    for i in 0..m {
        if out.is_empty() {
            break;
        }
        let (a, b) = (clip[i], clip[(i + 1) % m]);
        let input = std::mem::take(&mut out);
        let n = input.len();
        for j in 0..n {
            let p = input[j];
            let q = input[(j + 1) % n];
            let sp = side(a, b, p);
            let sq = side(a, b, q);
            if sp >= 0.0 {
                out.push(p);
                if sq < 0.0 {
                    out.push(line_cut(p, q, sp, sq));
                }
            } else if sq >= 0.0 {
                out.push(line_cut(p, q, sp, sq));
            }
        }
    }
    out
}

/// Area of `subject ∩ convex`, with `subject` of either orientation.
pub fn clipped_area(subject: &[Vec2], convex_ccw: &[Vec2]) -> f64 {
    polygon_area(&clip_convex(subject, convex_ccw)).abs()
}

/// Counterclockwise polygon approximating the disc sector `{|y| < r, a < arg y < b}`
/// (`b - a ≤ π`) with `n` arc segments; the polygon is inscribed.
pub fn sector_polygon(r: f64, a: f64, b: f64, n: usize) -> Vec<Vec2> {
    let mut v = vec![[0.0, 0.0]];
    for k in 0..=n {
        let t = a + (b - a) * k as f64 / n as f64;
        v.push([r * t.cos(), r * t.sin()]);
    }
    v
}

/// Proper intersection of segments `p1p2` and `q1q2` (shared endpoints excluded).
pub fn segments_cross(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = side(q1, q2, p1);
    let d2 = side(q1, q2, p2);
    let d3 = side(p1, p2, q1);
    let d4 = side(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// First pair of non-adjacent crossing segments of a closed loop, if any.
///
/// Uses a sort-and-sweep on the segments' x-extents.
pub fn self_intersection(v: &[Vec2]) -> Option<(usize, usize)> {
    let n = v.len();
    if n < 4 {
        return None;
    }
    let mut segs: Vec<(f64, f64, usize)> = (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            (a[0].min(b[0]), a[0].max(b[0]), i)
        })
        .collect();
    segs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut active: Vec<(f64, usize)> = Vec::new();
    for &(lo, hi, i) in &segs {
        active.retain(|&(h, _)| h >= lo);
        for &(_, j) in &active {
            let adj = (i + 1) % n == j || (j + 1) % n == i;
            if adj {
                continue;
            }
            if segments_cross(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return Some((i.min(j), i.max(j)));
            }
        }
        active.push((hi, i));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_square() {
        let a = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]];
        let b = [[1.0, 1.0], [3.0, 1.0], [3.0, 3.0], [1.0, 3.0]];
        assert!((clipped_area(&a, &b) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn concave_clip_area() {
        // L-shape of area 3, clipped by the square [0.5,1.5]²: overlap 0.75
        let l = [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]];
        let sq = [[0.5, 0.5], [1.5, 0.5], [1.5, 1.5], [0.5, 1.5]];
        assert!((clipped_area(&l, &sq) - 0.75).abs() < 1e-14);
    }

    #[test]
    fn bowtie_detected() {
        let v = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert!(self_intersection(&v).is_some());
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(self_intersection(&sq).is_none());
    }
}
