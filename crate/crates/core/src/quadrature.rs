//! Globally adaptive 21-point Gauss–Kronrod quadrature over a fixed set of
//! starting panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_224_153,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
pub(crate) struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// One Gauss–Kronrod (10, 21) step with QUADPACK error scaling.
pub(crate) fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut resabs = kronrod.abs();
    let mut fv = [(0.0, 0.0); 10];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        resasc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Estimate { value, error }
}

/// Integrate `f` over `[a, b]`, starting from `panels` equal subintervals
/// and bisecting the worst panel until `error ≤ max(abs_tol, rel_tol·|I|)`.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<Estimate> {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut heap = BinaryHeap::with_capacity(panels + 2 * max_subdivisions.min(1 << 16));
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        heap.push(Panel {
            a: lo,
            b: hi,
            est: gk21(f, lo, hi),
        });
    }

    let (mut value, mut error) = totals(&heap);
    let mut splits = 0;
    loop {
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target {
            // running sums drift; confirm against a fresh reduction
            let (v, e) = totals(&heap);
            if e <= abs_tol.max(rel_tol * v.abs()) {
                return Ok(Estimate { value: v, error: e });
            }
            value = v;
            error = e;
        }
        if splits >= max_subdivisions {
            let (value, error) = totals(&heap);
            return Err(Error::Quadrature {
                value,
                error_estimate: error,
                requested: abs_tol.max(rel_tol * value.abs()),
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            heap.push(worst);
            let (value, error) = totals(&heap);
            return Err(Error::Quadrature {
                value,
                error_estimate: error,
                requested: abs_tol.max(rel_tol * value.abs()),
            });
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        value += left.value + right.value - worst.est.value;
        error += left.error + right.error - worst.est.error;
        heap.push(Panel { a: worst.a, b: mid, est: left });
        heap.push(Panel { a: mid, b: worst.b, est: right });
        splits += 1;
    }
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    // sort by left edge so the compensated sum is independent of heap layout
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: CompensatedSum = panels.iter().map(|p| p.est.value).collect();
    let error: f64 = panels.iter().map(|p| p.est.error).sum();
    (value.value(), error)
}
