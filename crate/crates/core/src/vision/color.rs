//! sRGB to CIELUV under a D65 white point.

// linear sRGB -> XYZ, D65
const M: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

fn to_linear(c: u8) -> f64 {
    let c = c as f64 / 255.0;
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn chromaticity(x: f64, y: f64, z: f64) -> Option<(f64, f64)> {
    let d = x + 15.0 * y + 3.0 * z;
    (d > 0.0).then(|| (4.0 * x / d, 9.0 * y / d))
}

/// `(L*, u*, v*)`. The reference white is the image of sRGB white under the
/// matrix above, so (255, 255, 255) lands exactly on the neutral axis.
pub fn rgb_to_cieluv(rgb: [u8; 3]) -> [f64; 3] {
    let lin = rgb.map(to_linear);
    let [x, y, z] = M.map(|row| row[0] * lin[0] + row[1] * lin[1] + row[2] * lin[2]);
    let [xn, yn, zn] = M.map(|row| row[0] + row[1] + row[2]);

    let yr = y / yn;
    let l = if yr > (6.0f64 / 29.0).powi(3) { 116.0 * yr.cbrt() - 16.0 } else { (29.0f64 / 3.0).powi(3) * yr };
    let (Some((up, vp)), Some((upn, vpn))) = (chromaticity(x, y, z), chromaticity(xn, yn, zn)) else {
        return [0.0; 3];
    };
    [l, 13.0 * l * (up - upn), 13.0 * l * (vp - vpn)]
}

pub fn squared_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    (0..3).map(|i| (a[i] - b[i]).powi(2)).sum()
}
