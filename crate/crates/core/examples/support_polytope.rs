//! Outer polygonal approximations of a disk from its support function, and
//! how the Hausdorff gap shrinks as directions are added.

use approachkit::geometry::DirectionGrid;
use approachkit::lifting::{polygon_vertices, sample_support};

fn main() -> approachkit::Result<()> {
    for count in [8, 16, 32, 64] {
        let grid = DirectionGrid::circle(count);
        let poly = sample_support(|s| s.norm(), &grid)?;
        let (rows, offsets) = poly.constraint_rows();
        let vertices = polygon_vertices(&rows, &offsets)?;
        let gap = vertices.iter().map(|v| v.norm() - 1.0).fold(0.0, f64::max);
        let predicted = 1.0 / (std::f64::consts::PI / count as f64).cos() - 1.0;
        println!("{count:>3} directions: {} vertices, gap {gap:.6} (sec(π/k) − 1 = {predicted:.6})", vertices.len());
    }
    Ok(())
}
