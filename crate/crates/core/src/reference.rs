//! Published reference values for the interaction terms, thresholds and
//! transition-number curves at `Pr = 7.5`, with `r = 2/π` for `l_c = 1`
//! and `r = 2√3/π` for `l_c = 2`.

use std::f64::consts::PI;

pub const PRANDTL: f64 = 7.5;

/// Aspect ratio used for critical degree `lc`.
pub fn preset_aspect(lc: u32) -> Option<f64> {
    match lc {
        1 => Some(2.0 / PI),
        2 => Some(2.0 * 3f64.sqrt() / PI),
        _ => None,
    }
}

/// One published interaction term `D_{(l_c,1),(l,2)}` at `(Le, R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DEntry {
    pub lc: u32,
    pub le: f64,
    pub rayleigh: f64,
    pub l: u32,
    pub value: f64,
}

const fn d(lc: u32, le: f64, rayleigh: f64, l: u32, value: f64) -> DEntry {
    DEntry { lc, le, rayleigh, l, value }
}

/// Interaction terms for `l_c = 1`.
pub const TABLE_1: [DEntry; 16] = [
    d(1, 1e-2, 620.0, 0, 40.825),
    d(1, 1e-2, 620.0, 2, 1.493),
    d(1, 1e-2, 660.0, 0, -23.53),
    d(1, 1e-2, 660.0, 2, -0.8537),
    d(1, 1e-1, 620.0, 0, 1.955),
    d(1, 1e-1, 620.0, 2, 0.074),
    d(1, 1e-1, 660.0, 0, 0.275),
    d(1, 1e-1, 660.0, 2, 0.0122),
    d(1, 0.5, 620.0, 0, 0.477),
    d(1, 0.5, 620.0, 2, 0.0196),
    d(1, 0.5, 660.0, 0, 0.424),
    d(1, 0.5, 660.0, 2, 0.0176),
    d(1, 5.0, 620.0, 0, 0.421),
    d(1, 5.0, 620.0, 2, 0.175),
    d(1, 5.0, 660.0, 0, 0.427),
    d(1, 5.0, 660.0, 2, 0.1177),
];

/// Interaction terms for `l_c = 2`.
pub const TABLE_2: [DEntry; 24] = [
    d(2, 1e-2, 620.0, 0, 40.825),
    d(2, 1e-2, 620.0, 2, 8.359),
    d(2, 1e-2, 620.0, 4, 0.592),
    d(2, 1e-2, 660.0, 0, -23.53),
    d(2, 1e-2, 660.0, 2, -4.797),
    d(2, 1e-2, 660.0, 4, -0.338),
    d(2, 1e-1, 620.0, 0, 1.956),
    d(2, 1e-1, 620.0, 2, 0.407),
    d(2, 1e-1, 620.0, 4, 0.029),
    d(2, 1e-1, 660.0, 0, 0.275),
    d(2, 1e-1, 660.0, 2, 0.063),
    d(2, 1e-1, 660.0, 4, 0.005),
    d(2, 0.5, 620.0, 0, 0.477),
    d(2, 0.5, 620.0, 2, 0.104),
    d(2, 0.5, 620.0, 4, 0.008),
    d(2, 0.5, 660.0, 0, 0.424),
    d(2, 0.5, 660.0, 2, 0.093),
    d(2, 0.5, 660.0, 4, 0.007),
    d(2, 5.0, 620.0, 0, 0.421),
    d(2, 5.0, 620.0, 2, 0.092),
    d(2, 5.0, 620.0, 4, 0.0069),
    d(2, 5.0, 660.0, 0, 0.427),
    d(2, 5.0, 660.0, 2, 0.093),
    d(2, 5.0, 660.0, 4, 0.007),
];

/// Published Type-I/Type-II boundary `R*` and upper end `R₀` of the steady regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEntry {
    pub lc: u32,
    pub le: f64,
    pub r_star: f64,
    pub r0: f64,
}

const fn t(lc: u32, le: f64, r_star: f64, r0: f64) -> ThresholdEntry {
    ThresholdEntry { lc, le, r_star, r0 }
}

pub const TABLE_3: [ThresholdEntry; 3] = [
    t(1, 1e-2, 657.577, 665.038),
    t(1, 1e-1, 664.182, 740.309),
    t(1, 0.5, 877.346, 1402.69),
];

pub const TABLE_4: [ThresholdEntry; 3] = [
    t(2, 1e-2, 657.578, 665.038),
    t(2, 1e-1, 664.236, 740.309),
    t(2, 0.5, 878.513, 1402.69),
];

/// `(Le, R₁)` with `R₁ = σ_c/(1 − Le²)` at `σ_c = 27π⁴/4`.
pub const R1_VALUES: [(f64, f64); 3] = [(1e-2, 657.577), (1e-1, 664.153), (0.5, 876.682)];

/// Threshold radii `r₁`, `r₂` separating critical degrees.
pub const THRESHOLD_RADII: [f64; 2] = [0.844851, 1.31566];

/// A published `q_{l_c}(R)` curve on the critical surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSeries {
    pub lc: u32,
    pub le: f64,
    pub points: &'static [(f64, f64)],
}

const Q1_LE_0_01: [(f64, f64); 31] = [
    (600.0, 44.9055),
    (602.0, 44.7205),
    (604.0, 44.5235),
    (606.0, 44.3132),
    (608.0, 44.0881),
    (610.0, 43.8467),
    (612.0, 43.5872),
    (614.0, 43.3073),
    (616.0, 43.0046),
    (618.0, 42.6762),
    (620.0, 42.3186),
    (622.0, 41.9279),
    (624.0, 41.4991),
    (626.0, 41.0264),
    (628.0, 40.5027),
    (630.0, 39.9192),
    (632.0, 39.2652),
    (634.0, 38.5269),
    (636.0, 37.6869),
    (638.0, 36.7228),
    (640.0, 35.6047),
    (642.0, 34.2924),
    (644.0, 32.7308),
    (646.0, 30.8412),
    (648.0, 28.508),
    (650.0, 25.5543),
    (652.0, 21.6945),
    (654.0, 16.4363),
    (656.0, 8.85109),
    (658.0, -3.04463),
    (660.0, -24.3841),
];

const Q2_LE_0_01: [(f64, f64); 31] = [
    (600.0, 52.8269),
    (602.0, 52.6086),
    (604.0, 52.3761),
    (606.0, 52.1279),
    (608.0, 51.8624),
    (610.0, 51.5777),
    (612.0, 51.2716),
    (614.0, 50.9417),
    (616.0, 50.5849),
    (618.0, 50.1979),
    (620.0, 49.7767),
    (622.0, 49.3164),
    (624.0, 48.8113),
    (626.0, 48.2547),
    (628.0, 47.6381),
    (630.0, 46.9512),
    (632.0, 46.1814),
    (634.0, 45.3124),
    (636.0, 44.324),
    (638.0, 43.1895),
    (640.0, 41.874),
    (642.0, 40.3304),
    (644.0, 38.4934),
    (646.0, 36.2708),
    (648.0, 33.5268),
    (650.0, 30.0531),
    (652.0, 25.5142),
    (654.0, 19.3311),
    (656.0, 10.412),
    (658.0, -3.57501),
    (660.0, -28.6653),
];

const Q1_LE_0_1: [(f64, f64); 37] = [
    (600.0, 2.52833),
    (603.0, 2.46279),
    (606.0, 2.39432),
    (609.0, 2.32273),
    (612.0, 2.24779),
    (615.0, 2.16927),
    (618.0, 2.08689),
    (621.0, 2.00038),
    (624.0, 1.9094),
    (627.0, 1.81361),
    (630.0, 1.71261),
    (633.0, 1.60597),
    (636.0, 1.49319),
    (639.0, 1.37374),
    (642.0, 1.247),
    (645.0, 1.11229),
    (648.0, 0.968821),
    (651.0, 0.815718),
    (654.0, 0.651975),
    (657.0, 0.476443),
    (660.0, 0.2878),
    (663.0, 0.0845194),
    (666.0, -0.135171),
    (669.0, -0.373342),
    (672.0, -0.632428),
    (675.0, -0.915313),
    (678.0, -1.22543),
    (681.0, -1.56692),
    (684.0, -1.94479),
    (687.0, -2.36519),
    (690.0, -2.83572),
    (693.0, -3.36592),
    (696.0, -3.9679),
    (699.0, -4.65732),
    (702.0, -5.4547),
    (705.0, -6.38758),
    (708.0, -7.49369),
];

const Q2_LE_0_1: [(f64, f64); 37] = [
    (600.0, 2.97975),
    (603.0, 2.90258),
    (606.0, 2.82196),
    (609.0, 2.73767),
    (612.0, 2.64944),
    (615.0, 2.557),
    (618.0, 2.46003),
    (621.0, 2.35819),
    (624.0, 2.25111),
    (627.0, 2.13837),
    (630.0, 2.01951),
    (633.0, 1.894),
    (636.0, 1.76129),
    (639.0, 1.62074),
    (642.0, 1.47161),
    (645.0, 1.3131),
    (648.0, 1.14431),
    (651.0, 0.964185),
    (654.0, 0.771552),
    (657.0, 0.565058),
    (660.0, 0.343149),
    (663.0, 0.104032),
    (666.0, -0.154379),
    (669.0, -0.434517),
    (672.0, -0.739247),
    (675.0, -1.07196),
    (678.0, -1.43669),
    (681.0, -1.8383),
    (684.0, -2.28268),
    (687.0, -2.77706),
    (690.0, -3.33039),
    (693.0, -3.95386),
    (696.0, -4.66174),
    (699.0, -5.47241),
    (702.0, -6.41002),
    (705.0, -7.50692),
    (708.0, -8.8075),
];

const Q1_LE_0_5: [(f64, f64); 51] = [
    (600.0, 0.521524),
    (610.0, 0.509056),
    (620.0, 0.49627),
    (630.0, 0.483154),
    (640.0, 0.469693),
    (650.0, 0.455876),
    (660.0, 0.441687),
    (670.0, 0.427111),
    (680.0, 0.412133),
    (690.0, 0.396734),
    (700.0, 0.380898),
    (710.0, 0.364605),
    (720.0, 0.347835),
    (730.0, 0.330567),
    (740.0, 0.312778),
    (750.0, 0.294445),
    (760.0, 0.275542),
    (770.0, 0.256042),
    (780.0, 0.235916),
    (790.0, 0.215133),
    (800.0, 0.193662),
    (810.0, 0.171467),
    (820.0, 0.14851),
    (830.0, 0.124753),
    (840.0, 0.100151),
    (850.0, 0.0746601),
    (860.0, 0.0482303),
    (870.0, 0.0208088),
    (880.0, -0.00766135),
    (890.0, -0.0372414),
    (900.0, -0.0679976),
    (910.0, -0.100002),
    (920.0, -0.133331),
    (930.0, -0.16807),
    (940.0, -0.204309),
    (950.0, -0.242149),
    (960.0, -0.281698),
    (970.0, -0.323074),
    (980.0, -0.366407),
    (990.0, -0.411839),
    (1000.0, -0.459527),
    (1010.0, -0.509642),
    (1020.0, -0.562376),
    (1030.0, -0.617939),
    (1040.0, -0.676564),
    (1050.0, -0.738513),
    (1060.0, -0.804077),
    (1070.0, -0.873581),
    (1080.0, -0.947391),
    (1090.0, -1.02592),
    (1100.0, -1.10964),
];

const Q2_LE_0_5: [(f64, f64); 51] = [
    (600.0, 0.618288),
    (610.0, 0.603586),
    (620.0, 0.58851),
    (630.0, 0.573046),
    (640.0, 0.557178),
    (650.0, 0.54089),
    (660.0, 0.524165),
    (670.0, 0.506985),
    (680.0, 0.489331),
    (690.0, 0.471185),
    (700.0, 0.452523),
    (710.0, 0.433324),
    (720.0, 0.413565),
    (730.0, 0.393221),
    (740.0, 0.372264),
    (750.0, 0.350667),
    (760.0, 0.3284),
    (770.0, 0.305432),
    (780.0, 0.281727),
    (790.0, 0.257251),
    (800.0, 0.231965),
    (810.0, 0.205828),
    (820.0, 0.178796),
    (830.0, 0.150822),
    (840.0, 0.121856),
    (850.0, 0.0918446),
    (860.0, 0.0607293),
    (870.0, 0.0284482),
    (880.0, -0.00506559),
    (890.0, -0.0398842),
    (900.0, -0.0760856),
    (910.0, -0.113754),
    (920.0, -0.15298),
    (930.0, -0.193863),
    (940.0, -0.236511),
    (950.0, -0.28104),
    (960.0, -0.327578),
    (970.0, -0.376264),
    (980.0, -0.42725),
    (990.0, -0.480705),
    (1000.0, -0.53681),
    (1010.0, -0.595771),
    (1020.0, -0.657809),
    (1030.0, -0.723172),
    (1040.0, -0.792137),
    (1050.0, -0.865008),
    (1060.0, -0.942129),
    (1070.0, -1.02388),
    (1080.0, -1.1107),
    (1090.0, -1.20306),
    (1100.0, -1.30153),
];

const Q1_LE_5: [(f64, f64); 41] = [
    (200.0, 0.29079),
    (220.0, 0.303498),
    (240.0, 0.31522),
    (260.0, 0.326065),
    (280.0, 0.33613),
    (300.0, 0.345495),
    (320.0, 0.354231),
    (340.0, 0.3624),
    (360.0, 0.370055),
    (380.0, 0.377243),
    (400.0, 0.384007),
    (420.0, 0.390382),
    (440.0, 0.396402),
    (460.0, 0.402095),
    (480.0, 0.407488),
    (500.0, 0.412603),
    (520.0, 0.417462),
    (540.0, 0.422084),
    (560.0, 0.426485),
    (580.0, 0.430682),
    (600.0, 0.434687),
    (620.0, 0.438515),
    (640.0, 0.442176),
    (660.0, 0.445682),
    (680.0, 0.449042),
    (700.0, 0.452265),
    (720.0, 0.455359),
    (740.0, 0.458333),
    (760.0, 0.461192),
    (780.0, 0.463944),
    (800.0, 0.466595),
    (820.0, 0.46915),
    (840.0, 0.471614),
    (860.0, 0.473992),
    (880.0, 0.476288),
    (900.0, 0.478507),
    (920.0, 0.480653),
    (940.0, 0.482729),
    (960.0, 0.484739),
    (980.0, 0.486685),
    (1000.0, 0.488571),
];

const Q2_LE_5: [(f64, f64); 41] = [
    (200.0, 0.345274),
    (220.0, 0.360275),
    (240.0, 0.374117),
    (260.0, 0.38693),
    (280.0, 0.398825),
    (300.0, 0.409898),
    (320.0, 0.420233),
    (340.0, 0.429901),
    (360.0, 0.438965),
    (380.0, 0.447482),
    (400.0, 0.455499),
    (420.0, 0.46306),
    (440.0, 0.470203),
    (460.0, 0.476963),
    (480.0, 0.483369),
    (500.0, 0.48945),
    (520.0, 0.49523),
    (540.0, 0.50073),
    (560.0, 0.505972),
    (580.0, 0.510973),
    (600.0, 0.51575),
    (620.0, 0.520318),
    (640.0, 0.524691),
    (660.0, 0.52888),
    (680.0, 0.532899),
    (700.0, 0.536756),
    (720.0, 0.540463),
    (740.0, 0.544027),
    (760.0, 0.547458),
    (780.0, 0.550762),
    (800.0, 0.553947),
    (820.0, 0.55702),
    (840.0, 0.559985),
    (860.0, 0.56285),
    (880.0, 0.565619),
    (900.0, 0.568298),
    (920.0, 0.57089),
    (940.0, 0.5734),
    (960.0, 0.575832),
    (980.0, 0.57819),
    (1000.0, 0.580477),
];

/// Transition-number curves, one per `(Le, l_c)`.
pub const CURVES: [CurveSeries; 8] = [
    CurveSeries {
        lc: 1,
        le: 1e-2,
        points: &Q1_LE_0_01,
    },
    CurveSeries {
        lc: 2,
        le: 1e-2,
        points: &Q2_LE_0_01,
    },
    CurveSeries {
        lc: 1,
        le: 0.1,
        points: &Q1_LE_0_1,
    },
    CurveSeries {
        lc: 2,
        le: 0.1,
        points: &Q2_LE_0_1,
    },
    CurveSeries {
        lc: 1,
        le: 0.5,
        points: &Q1_LE_0_5,
    },
    CurveSeries {
        lc: 2,
        le: 0.5,
        points: &Q2_LE_0_5,
    },
    CurveSeries {
        lc: 1,
        le: 5.0,
        points: &Q1_LE_5,
    },
    CurveSeries {
        lc: 2,
        le: 5.0,
        points: &Q2_LE_5,
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_are_sorted_and_complete() {
        assert_eq!(CURVES.iter().map(|c| c.points.len()).sum::<usize>(), 2 * (31 + 37 + 51 + 41));
        for c in &CURVES {
            assert!(c.points.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn large_lewis_curves_are_positive() {
        for c in CURVES.iter().filter(|c| c.le > 1.0) {
            assert!(c.points.iter().all(|p| p.1 > 0.0));
        }
    }
}
