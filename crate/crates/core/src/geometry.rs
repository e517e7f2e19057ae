//! Element offsets, TX/RIS/RX distances and incidence/departure angles as
//! functions of the horizontal placement `r1h`.
//!
//! Coordinates: TX at `(0, 0, h_t)`, RX at `(r_h, 0, h_r)`, surface centre at
//! `(r1h, y_s, h_s)`. Element `(p, l)` sits at `(r1h - d_p, y_s, h_s - d_l)`,
//! so `d_l > 0` means below the centre.

use crate::scenario::Scenario;

/// Centred lateral offsets of the `rows x cols` reflective units, stored
/// row-major: element `(p, l)` (1-indexed) is at index `(p-1)*cols + (l-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementGrid {
    pub rows: usize,
    pub cols: usize,
    /// `(d_p, d_l)` pairs in meters.
    pub offsets: Vec<(f64, f64)>,
}

impl ElementGrid {
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn offset(&self, p: usize, l: usize) -> (f64, f64) {
        self.offsets[(p - 1) * self.cols + (l - 1)]
    }
}

/// `d_p = (p - (M_x+1)/2) d_x`, `d_l = (l - (M_y+1)/2) d_y`.
pub fn element_offsets(rows: usize, cols: usize, dx_m: f64, dy_m: f64) -> ElementGrid {
    let px = (rows as f64 + 1.0) / 2.0;
    let ly = (cols as f64 + 1.0) / 2.0;
    let offsets = (1..=rows)
        .flat_map(|p| (1..=cols).map(move |l| ((p as f64 - px) * dx_m, (l as f64 - ly) * dy_m)))
        .collect();
    ElementGrid {
        rows,
        cols,
        offsets,
    }
}

/// Center-to-center geometry of one placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub r1h_m: f64,
    pub r1_m: f64,
    pub r2_m: f64,
    pub theta_i_rad: f64,
    pub theta_r_rad: f64,
}

impl LinkGeometry {
    pub fn at(r1h_m: f64, scenario: &Scenario) -> Self {
        let (r1_m, r2_m) = center_distances(r1h_m, scenario);
        Self {
            r1h_m,
            r1_m,
            r2_m,
            theta_i_rad: incidence_angle(r1h_m, scenario),
            theta_r_rad: departure_angle(r1h_m, scenario),
        }
    }

    /// `cos(theta_i)`, equal to `y_s / r1`.
    pub fn cos_incidence(&self) -> f64 {
        self.theta_i_rad.cos()
    }

    pub fn cos_departure(&self) -> f64 {
        self.theta_r_rad.cos()
    }
}

/// TX–centre and centre–RX distances.
pub fn center_distances(r1h_m: f64, s: &Scenario) -> (f64, f64) {
    let ys = s.lateral_offset_m;
    let r1 = (r1h_m * r1h_m + ys * ys + sq(s.ris_height_m - s.tx_height_m)).sqrt();
    let r2 = (sq(s.txrx_horizontal_m - r1h_m) + ys * ys + sq(s.ris_height_m - s.rx_height_m)).sqrt();
    (r1, r2)
}

/// Per-element `(r1pl, r2pl)` distances, in grid order.
///
/// The element's displacement toward the TX along the street is a
/// displacement away from the RX, hence `r_h - r1h + d_p` in the second
/// distance.
pub fn element_distances(r1h_m: f64, grid: &ElementGrid, s: &Scenario) -> Vec<(f64, f64)> {
    let ys2 = s.lateral_offset_m * s.lateral_offset_m;
    let dh_t = s.ris_height_m - s.tx_height_m;
    let dh_r = s.ris_height_m - s.rx_height_m;
    let far = s.txrx_horizontal_m - r1h_m;
    grid.offsets
        .iter()
        .map(|&(dp, dl)| {
            let r1 = (sq(r1h_m - dp) + ys2 + sq(dh_t - dl)).sqrt();
            let r2 = (sq(far + dp) + ys2 + sq(dh_r - dl)).sqrt();
            (r1, r2)
        })
        .collect()
}

pub fn incidence_angle(r1h_m: f64, s: &Scenario) -> f64 {
    let num = (r1h_m * r1h_m + sq(s.ris_height_m - s.tx_height_m)).sqrt();
    (num / s.lateral_offset_m).atan()
}

pub fn departure_angle(r1h_m: f64, s: &Scenario) -> f64 {
    let num = (sq(r1h_m - s.txrx_horizontal_m) + sq(s.ris_height_m - s.rx_height_m)).sqrt();
    (num / s.lateral_offset_m).atan()
}

#[inline]
fn sq(x: f64) -> f64 {
    x * x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// Places TX, element and RX as 3-D points and measures directly.
    fn coordinate_oracle(r1h: f64, dp: f64, dl: f64, s: &Scenario) -> (f64, f64) {
        let tx = [0.0, 0.0, s.tx_height_m];
        let rx = [s.txrx_horizontal_m, 0.0, s.rx_height_m];
        let el = [r1h - dp, s.lateral_offset_m, s.ris_height_m - dl];
        (dist3(tx, el), dist3(el, rx))
    }

    #[test]
    fn degenerate_grid() {
        let g = element_offsets(1, 1, 0.1, 0.1);
        assert_eq!(g.offsets, vec![(0.0, 0.0)]);
    }

    #[test]
    fn two_by_one_is_symmetric() {
        let lambda = 0.0107;
        let g = element_offsets(2, 1, lambda / 2.0, lambda / 2.0);
        assert_eq!(g.offsets, vec![(-lambda / 4.0, 0.0), (lambda / 4.0, 0.0)]);
    }

    #[test]
    fn fifty_by_fifty_centering() {
        let dx = 0.005;
        let g = element_offsets(50, 50, dx, dx);
        assert_eq!(g.len(), 2500);
        assert_eq!(g.offset(1, 1), (-24.5 * dx, -24.5 * dx));
        assert_eq!(g.offset(50, 50), (24.5 * dx, 24.5 * dx));
        let (sp, sl) = g
            .offsets
            .iter()
            .fold((0.0, 0.0), |(a, b), &(p, l)| (a + p, b + l));
        assert!(sp.abs() < 1e-12 && sl.abs() < 1e-12);
        // adjacent spacing
        assert!((g.offset(2, 1).0 - g.offset(1, 1).0 - dx).abs() < 1e-15);
        assert!((g.offset(1, 2).1 - g.offset(1, 1).1 - dx).abs() < 1e-15);
    }

    #[test]
    fn center_distance_examples() {
        let mut s = Scenario::reference(3.0);
        s.ris_height_m = s.tx_height_m;
        assert_eq!(center_distances(0.0, &s).0, 3.0);

        let s = Scenario::reference(5.0);
        let (r1, _) = center_distances(10.0, &s);
        assert!((r1 - 206f64.sqrt()).abs() < 1e-12);
        assert!((r1 - 14.352_700_094_407_323).abs() < 1e-12);

        let (r1, r2) = center_distances(50.0, &s);
        assert_eq!(r1, r2);
    }

    #[test]
    fn center_element_matches_center_distances() {
        let s = Scenario::reference(5.0);
        let g = element_offsets(1, 1, 0.1, 0.1);
        let d = element_distances(23.0, &g, &s);
        assert_eq!(d[0], center_distances(23.0, &s));
    }

    #[test]
    fn mirror_elements_swap_distances() {
        // with h_t = h_r and the surface midway, (d_p, d_l) and (-d_p, d_l)
        // see each other's distances reversed
        let s = Scenario::reference(5.0);
        let g = element_offsets(4, 3, 0.3, 0.2);
        let d = element_distances(50.0, &g, &s);
        for p in 1..=4 {
            for l in 1..=3 {
                let a = d[(p - 1) * 3 + (l - 1)];
                let b = d[(4 - p) * 3 + (l - 1)];
                assert!((a.0 - b.1).abs() < 1e-12);
                assert!((a.1 - b.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn table_point_against_coordinates() {
        let s = Scenario::reference(5.0);
        let q = s.wavelength_m() / 4.0;
        let g = ElementGrid {
            rows: 1,
            cols: 1,
            offsets: vec![(q, q)],
        };
        let got = element_distances(10.0, &g, &s)[0];
        let want = coordinate_oracle(10.0, q, q, &s);
        assert!((got.0 - want.0).abs() / want.0 < 1e-12);
        assert!((got.1 - want.1).abs() / want.1 < 1e-12);
    }

    #[test]
    fn random_configurations_against_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut s = Scenario::reference(rng.gen_range(0.5..40.0));
            s.tx_height_m = rng.gen_range(0.5..30.0);
            s.rx_height_m = rng.gen_range(0.5..30.0);
            s.ris_height_m = rng.gen_range(0.5..30.0);
            s.txrx_horizontal_m = rng.gen_range(5.0..300.0);
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let g = element_offsets(rows, cols, rng.gen_range(1e-3..0.5), rng.gen_range(1e-3..0.5));
            let r1h = rng.gen_range(0.0..s.txrx_horizontal_m);
            for (&(dp, dl), got) in g.offsets.iter().zip(element_distances(r1h, &g, &s)) {
                let want = coordinate_oracle(r1h, dp, dl, &s);
                assert!((got.0 - want.0).abs() / want.0 < 1e-12);
                assert!((got.1 - want.1).abs() / want.1 < 1e-12);
            }
        }
    }

    #[test]
    fn angle_examples() {
        let mut s = Scenario::reference(5.0);
        let th = incidence_angle(10.0, &s);
        assert!((th - (181f64.sqrt() / 5.0).atan()).abs() < 1e-15);
        assert!((th - 1.214_968_444_298_317_7).abs() < 1e-12);

        s.ris_height_m = s.tx_height_m;
        assert_eq!(incidence_angle(0.0, &s), 0.0);
        assert_eq!(departure_angle(s.txrx_horizontal_m, &s), 0.0);
    }

    #[test]
    fn cos_incidence_is_offset_over_distance() {
        let s = Scenario::reference(5.0);
        let geo = LinkGeometry::at(37.0, &s);
        assert!((geo.cos_incidence() - 5.0 / geo.r1_m).abs() < 1e-14);
        assert!((geo.cos_departure() - 5.0 / geo.r2_m).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn element_distance_triangle_bound(r1h in 0.0..100.0f64, ys in 0.5..30.0f64, rows in 1usize..6, cols in 1usize..6) {
            let s = Scenario::reference(ys);
            let g = element_offsets(rows, cols, 0.2, 0.15);
            let (r1, r2) = center_distances(r1h, &s);
            for (&(dp, dl), (a, b)) in g.offsets.iter().zip(element_distances(r1h, &g, &s)) {
                let bound = (dp * dp + dl * dl).sqrt() + 1e-12;
                prop_assert!((a - r1).abs() <= bound);
                prop_assert!((b - r2).abs() <= bound);
            }
        }

        #[test]
        fn angles_monotone(x in 0.0..99.0f64, dx in 1e-3..1.0f64, ys in 0.5..30.0f64) {
            let s = Scenario::reference(ys);
            prop_assert!(incidence_angle(x + dx, &s) > incidence_angle(x, &s));
            let y = (x + dx).min(100.0);
            prop_assert!(departure_angle(y, &s) < departure_angle(x, &s));
            prop_assert!(incidence_angle(x, &s) < std::f64::consts::FRAC_PI_2);
        }
    }
}
