//! Regenerate the demo fingerprints under assets/demo:
//!
//! ```text
//! cargo run -p biostego-core --example gen_fixtures -- assets/demo
//! ```

use biostego_core::raster::{save_gray, GrayImage};
use biostego_core::synthetic::{demo_fingerprint, impostor_fingerprint};

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "assets/demo".to_string());
    std::fs::create_dir_all(&dir).expect("create output directory");
    let alice = format!("{dir}/finger_alice.pgm");
    let mallory = format!("{dir}/finger_mallory.pgm");
    let cover = format!("{dir}/cover.pgm");
    save_gray(&demo_fingerprint().render(), &alice).expect("write alice");
    save_gray(&impostor_fingerprint().render(), &mallory).expect("write mallory");
    // A lossless cover with some texture for the LSB channel demos.
    let texture = GrayImage::from_fn(192, 192, |x, y| {
        let v = 96.0
            + 60.0 * (x as f64 / 23.0).sin()
            + 50.0 * (y as f64 / 17.0).cos()
            + 24.0 * ((x + y) as f64 / 9.0).sin();
        v.round().clamp(0.0, 255.0) as u8
    });
    save_gray(&texture, &cover).expect("write cover");
    println!("wrote {alice}");
    println!("wrote {mallory}");
    println!("wrote {cover}");
}
