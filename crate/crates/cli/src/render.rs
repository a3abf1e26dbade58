//! SVG rendering of tilings and atlases on the two-dimensional torus.
//!
//! Output is a pure function of the artifact and the [`RenderSpec`]: no
//! timestamps, hash-order iteration or floating-point formatting of
//! non-integers, so identical input gives byte-identical SVG.

use std::fmt::Write as _;

use anyhow::{bail, Result};

use folner_core::action_space::{ActionWindow, Carrier};

use crate::io::TilingFile;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    pub cell: u32,
    pub palette_seed: u64,
    pub tiles: bool,
    pub leftover: bool,
    pub slots: bool,
    pub matching: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell: 4,
            palette_seed: 0,
            tiles: true,
            leftover: true,
            slots: false,
            matching: false,
        }
    }
}

/// Fill color of shape class `class` (0-based): hues spaced by the golden
/// angle from a seed-dependent start.
pub fn class_color(class: usize, seed: u64) -> String {
    let start = (seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 40) % 360;
    let hue = (start + class as u64 * 137) % 360;
    let light = [0.62, 0.48, 0.74][class / 3 % 3];
    let (r, g, b) = hsl_to_rgb(hue as f64, 0.7, light);
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> (u8, u8, u8) {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let to = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    (to(r), to(g), to(b))
}

pub fn render_svg(file: &TilingFile, spec: &RenderSpec) -> Result<String> {
    let window = file.window()?;
    let side = match window.carrier() {
        Carrier::Torus { dim: 2, side } => side,
        other => bail!("render needs a two-dimensional torus, got {other:?}"),
    };
    if spec.cell == 0 {
        bail!("cell size must be positive");
    }
    let tiling = file.tiling(&window)?;
    let c = spec.cell as usize;
    let px = side * c;

    // owner[p] = (class, tile) covering p, tiles numbered in artifact order.
    const NONE: (u32, u32) = (u32::MAX, u32::MAX);
    let mut owner = vec![NONE; window.size()];
    let mut tile_id = 0u32;
    for (class, (shape, centers)) in tiling.shapes.iter().zip(&tiling.centers).enumerate() {
        for &x in centers {
            for g in shape {
                owner[window.act(g, x)] = (class as u32, tile_id);
            }
            tile_id += 1;
        }
    }

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{px}" height="{px}" viewBox="0 0 {px} {px}" shape-rendering="crispEdges">"#
    )?;
    writeln!(svg, r##"<rect width="{px}" height="{px}" fill="#ffffff"/>"##)?;

    if spec.tiles {
        writeln!(svg, r#"<g id="tiles">"#)?;
        for row in 0..side {
            let mut col = 0;
            while col < side {
                let class = owner[row * side + col].0;
                let start = col;
                while col < side && owner[row * side + col].0 == class {
                    col += 1;
                }
                if class != u32::MAX {
                    writeln!(
                        svg,
                        r#"<rect x="{}" y="{}" width="{}" height="{c}" fill="{}"/>"#,
                        start * c,
                        row * c,
                        (col - start) * c,
                        class_color(class as usize, spec.palette_seed)
                    )?;
                }
            }
        }
        writeln!(svg, "</g>")?;
        write_borders(&mut svg, &owner, side, c)?;
    }

    if spec.leftover {
        if let Some(set) = &file.leftover {
            write_cells(&mut svg, "leftover", "#202020", "0.55", &set.decode()?, side, c)?;
        }
    }
    if spec.slots {
        if let Some(set) = &file.slots {
            write_cells(&mut svg, "slots", "#ffffff", "0.6", &set.decode()?, side, c)?;
        }
    }
    if spec.matching {
        if let Some(pairs) = &file.matching {
            write_arrows(&mut svg, &window, pairs, side, c)?;
        }
    }
    writeln!(svg, "</svg>")?;
    Ok(svg)
}

/// Thin lines along every edge between cells owned by different tiles, with
/// collinear unit edges merged.
fn write_borders(svg: &mut String, owner: &[(u32, u32)], side: usize, c: usize) -> Result<()> {
    let at = |r: usize, col: usize| owner[(r % side) * side + col % side].1;
    writeln!(svg, r##"<path id="borders" fill="none" stroke="#303030" stroke-width="1" d=""##)?;
    // Horizontal edges above row r (r = 0 compares with the wrapped last row).
    for r in 0..side {
        let mut col = 0;
        while col < side {
            if at(r, col) != at(r + side - 1, col) {
                let start = col;
                while col < side && at(r, col) != at(r + side - 1, col) {
                    col += 1;
                }
                writeln!(svg, "M{} {}h{}", start * c, r * c, (col - start) * c)?;
            } else {
                col += 1;
            }
        }
    }
    // Vertical edges left of column k.
    for k in 0..side {
        let mut r = 0;
        while r < side {
            if at(r, k) != at(r, k + side - 1) {
                let start = r;
                while r < side && at(r, k) != at(r, k + side - 1) {
                    r += 1;
                }
                writeln!(svg, "M{} {}v{}", k * c, start * c, (r - start) * c)?;
            } else {
                r += 1;
            }
        }
    }
    writeln!(svg, r#""/>"#)?;
    Ok(())
}

fn write_cells(
    svg: &mut String,
    id: &str,
    fill: &str,
    opacity: &str,
    set: &folner_core::action_space::PointSet,
    side: usize,
    c: usize,
) -> Result<()> {
    writeln!(svg, r#"<g id="{id}" fill="{fill}" fill-opacity="{opacity}">"#)?;
    for (start, end) in set.runs() {
        // Runs are in index order; split them at row ends.
        let mut p = start;
        while p < end {
            let row = p / side;
            let stop = end.min((row + 1) * side);
            writeln!(
                svg,
                r#"<rect x="{}" y="{}" width="{}" height="{c}"/>"#,
                (p % side) * c,
                row * c,
                (stop - p) * c
            )?;
            p = stop;
        }
    }
    writeln!(svg, "</g>")?;
    Ok(())
}

/// One segment per matched pair, drawn along the shortest torus displacement
/// from the leftover point.
fn write_arrows(
    svg: &mut String,
    window: &ActionWindow,
    pairs: &[(Vec<i64>, Vec<i64>)],
    side: usize,
    c: usize,
) -> Result<()> {
    let n = side as i64;
    let c = c as i64;
    let wrap = |d: i64| {
        let d = d.rem_euclid(n);
        if 2 * d > n {
            d - n
        } else {
            d
        }
    };
    writeln!(
        svg,
        r##"<path id="matching" fill="none" stroke="#b00020" stroke-width="0.75" d=""##
    )?;
    for (y, z) in pairs {
        window.index(y)?;
        window.index(z)?;
        let (r0, c0) = (y[0], y[1]);
        let (dr, dc) = (wrap(z[0] - y[0]), wrap(z[1] - y[1]));
        writeln!(
            svg,
            "M{} {}l{} {}",
            c0 * c + c / 2,
            r0 * c + c / 2,
            dc * c,
            dr * c
        )?;
    }
    writeln!(svg, r#""/>"#)?;
    Ok(())
}
