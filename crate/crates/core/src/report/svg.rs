use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{NetworkGraph, Region};
use crate::sim::LocState;
use crate::Scalar;

const CANVAS: f64 = 800.0;
const MARGIN: f64 = 20.0;

fn class_of(state: LocState, beacon: bool) -> &'static str {
    match (beacon, state) {
        (true, _) => "beacon",
        (false, LocState::Flexible) => "flexible",
        (false, LocState::Rigid) => "rigid",
        (false, LocState::Localizable) => "localizable",
    }
}

/// SVG map of the network with one marker per node, coloured by state.
pub fn state_map_svg<T: Scalar>(net: &NetworkGraph<T>, states: &[LocState]) -> Result<String> {
    if states.is_empty() {
        return Err(Error::EmptyStates);
    }
    if states.len() != net.node_count() {
        return Err(Error::InvalidConfig(format!(
            "{} states for {} nodes",
            states.len(),
            net.node_count()
        )));
    }
    let pts: Vec<(f64, f64)> = net.positions().iter().map(|p| (p.x.as_f64(), p.y.as_f64())).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (CANVAS - 2.0 * MARGIN) / span;
    // Flip y so the map reads like a plot.
    let tx = |x: f64| MARGIN + (x - x0) * scale;
    let ty = |y: f64| CANVAS - MARGIN - (y - y0) * scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    s.push_str(
        "<style>.link{stroke:#ccc;stroke-width:0.5}.hole{fill:none;stroke:#000;stroke-dasharray:6 4}\
         .flexible{fill:#888}.rigid{fill:#e6c200}.localizable{fill:#1f5fd6}.beacon{fill:#d62728}</style>\n",
    );
    s.push_str("<g class=\"links\">\n");
    for &(a, b) in net.radio().edges() {
        let _ = writeln!(
            s,
            r#"<line class="link" x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
            tx(pts[a].0),
            ty(pts[a].1),
            tx(pts[b].0),
            ty(pts[b].1)
        );
    }
    s.push_str("</g>\n");
    if let Some(region) = net.hole {
        match region {
            Region::Disc { cx, cy, r } => {
                let _ = writeln!(
                    s,
                    r#"<circle class="hole" cx="{:.1}" cy="{:.1}" r="{:.1}"/>"#,
                    tx(cx),
                    ty(cy),
                    r * scale
                );
            }
            Region::Rect { x0: rx0, y0: ry0, x1: rx1, y1: ry1 } => {
                let _ = writeln!(
                    s,
                    r#"<rect class="hole" x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}"/>"#,
                    tx(rx0.min(rx1)),
                    ty(ry0.max(ry1)),
                    (rx1 - rx0).abs() * scale,
                    (ry1 - ry0).abs() * scale
                );
            }
        }
    }
    s.push_str("<g class=\"nodes\">\n");
    for v in net.ids() {
        let (x, y) = pts[v.index()];
        let class = class_of(states[v.index()], net.is_beacon(v));
        let _ = writeln!(
            s,
            r#"<circle class="node {class}" cx="{:.1}" cy="{:.1}" r="4"><title>{}</title></circle>"#,
            tx(x),
            ty(y),
            net.label(v)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn render_state_map<T: Scalar>(
    net: &NetworkGraph<T>,
    states: &[LocState],
    path: impl AsRef<Path>,
) -> Result<()> {
    let svg = state_map_svg(net, states)?;
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_network, Position};

    fn k4(beacons: &[bool]) -> NetworkGraph {
        let pos = vec![
            Position::new(0.0, 0.0),
            Position::new(1.0, 0.0),
            Position::new(0.0, 1.0),
            Position::new(1.0, 1.0),
        ];
        build_network(pos, beacons, 2.0).unwrap()
    }

    #[test]
    fn k4_all_localizable_is_one_class() {
        let svg = state_map_svg(&k4(&[]), &[LocState::Localizable; 4]).unwrap();
        assert_eq!(svg.matches("class=\"node ").count(), 4);
        assert_eq!(svg.matches("class=\"node localizable\"").count(), 4);
        assert_eq!(svg.matches("class=\"link\"").count(), 6);
        assert!(!svg.contains("class=\"hole\""));
    }

    #[test]
    fn beacons_get_their_own_class() {
        let states = [LocState::Localizable, LocState::Localizable, LocState::Rigid, LocState::Flexible];
        let svg = state_map_svg(&k4(&[true, true]), &states).unwrap();
        assert_eq!(svg.matches("node beacon").count(), 2);
        assert_eq!(svg.matches("node rigid").count(), 1);
        assert_eq!(svg.matches("node flexible").count(), 1);
    }

    #[test]
    fn hole_outline_is_drawn() {
        let mut net = k4(&[]);
        net.hole = Some(Region::Disc { cx: 0.5, cy: 0.5, r: 0.2 });
        let svg = state_map_svg(&net, &[LocState::Flexible; 4]).unwrap();
        assert_eq!(svg.matches("class=\"hole\"").count(), 1);
    }

    #[test]
    fn empty_states_rejected() {
        assert!(matches!(state_map_svg(&k4(&[]), &[]), Err(Error::EmptyStates)));
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let err = render_state_map(&k4(&[]), &[LocState::Flexible; 4], "/nonexistent-dir/x/map.svg");
        assert!(matches!(err, Err(Error::Io(_))));
    }
}
