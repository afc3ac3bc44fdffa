use super::rng::SplitMix64;
use crate::imaging::{BinaryRoi, ColorChannel, RgbFrame};

/// Flow color at a given intensity. Hues land near 231° (blue) and 4° (red).
fn flow_color(channel: ColorChannel, intensity: u8) -> [u8; 3] {
    let i = intensity as u16;
    match channel {
        ColorChannel::Blue => [(i / 8) as u8, (i / 4) as u8, intensity],
        ColorChannel::Red => [intensity, (i / 6) as u8, (i / 10) as u8],
    }
}

fn opposite(channel: ColorChannel) -> ColorChannel {
    match channel {
        ColorChannel::Blue => ColorChannel::Red,
        ColorChannel::Red => ColorChannel::Blue,
    }
}

/// Paint a ROI as a Doppler overlay on a dark grayscale background.
///
/// The frame also carries isolated single-pixel speckles of the ROI's color
/// and a solid patch of the opposite color in a side strip, so segmentation
/// has to discard both. Deterministic in `seed`.
pub fn render_frame(roi: &BinaryRoi, channel: ColorChannel, seed: u64) -> RgbFrame {
    let mut rng = SplitMix64::new(seed);
    let left = rng.range(6, 20) as usize;
    let top = rng.range(6, 20) as usize;
    let right = rng.range(6, 20) as usize;
    let bottom = rng.range(6, 20) as usize;
    const STRIP: usize = 24;
    let width = left + roi.width() + right + STRIP;
    let height = (top + roi.height() + bottom).max(STRIP + 4);

    let mut pixels = Vec::with_capacity(width * height);
    for _ in 0..width * height {
        let v = rng.range(8, 100) as u8;
        let tint = rng.range(0, 4) as u8;
        pixels.push([v, v.saturating_add(tint), v]);
    }
    let mut frame = RgbFrame::new(width, height, pixels).expect("positive frame size");

    for (x, y) in roi.foreground() {
        let intensity = rng.range(150, 255) as u8;
        frame.set(left + x, top + y, flow_color(channel, intensity));
    }

    // opposite-color patch in the side strip
    let strip_x = width - STRIP + 4;
    let other = opposite(channel);
    for y in 2..18.min(height - 2) {
        for x in strip_x..strip_x + 14 {
            frame.set(x, y, flow_color(other, 220));
        }
    }

    // isolated same-color speckles in the strip, two pixels apart so the
    // opening removes each of them
    let speckles = rng.range(3, 10);
    for _ in 0..speckles {
        let x = width - STRIP + 2 * rng.range(1, 10) as usize;
        let y = 20 + 2 * rng.range(0, ((height - 22) / 2) as i64) as usize;
        if y < height {
            frame.set(x, y, flow_color(channel, 230));
        }
    }
    frame
}
