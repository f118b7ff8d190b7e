//! LSB image steganography: payload bytes in the least significant bit of
//! successive samples, framed by a magic + length header so extraction is
//! self-describing.
//!
//! Bitstream layout (bit-exact): bits 0..32 are the ASCII magic `BSG1`
//! (MSB-first per byte), bits 32..64 the payload length in bytes as a
//! big-endian u32, then the payload bytes MSB-first. Samples are consumed
//! in row-major order. Covers must be stored losslessly.

use thiserror::Error;

use crate::raster::GrayImage;

pub const STEGO_MAGIC: [u8; 4] = *b"BSG1";
/// Header size in bits: 32 magic + 32 length.
pub const HEADER_BITS: u64 = 64;

#[derive(Debug, Error)]
pub enum StegoError {
    #[error("payload needs {required_bits} bits but the cover holds {available_bits}")]
    PayloadTooLarge { required_bits: u64, available_bits: u64 },
    #[error("no stego header found (magic mismatch)")]
    NoMagic,
    #[error("header declares {declared_bytes} payload bytes but the image holds {capacity_bits} bits")]
    TruncatedPayload { declared_bytes: u64, capacity_bits: u64 },
}

/// Embedding capacity of a cover in bits: one bit per 8-bit sample.
pub fn capacity(cover: &GrayImage) -> u64 {
    capacity_for_samples(cover.width() as u64 * cover.height() as u64)
}

/// Capacity for a raw sample count; multi-channel covers contribute one bit
/// per channel sample.
pub fn capacity_for_samples(samples: u64) -> u64 {
    samples
}

/// Write header + payload into the cover's sample LSBs. Every stego sample
/// differs from its cover sample by at most 1, and samples beyond the
/// written region are untouched.
pub fn embed_lsb(cover: &GrayImage, payload: &[u8]) -> Result<GrayImage, StegoError> {
    let available_bits = capacity(cover);
    let required_bits = HEADER_BITS + 8 * payload.len() as u64;
    if required_bits > available_bits {
        return Err(StegoError::PayloadTooLarge { required_bits, available_bits });
    }
    let mut samples = cover.data().to_vec();
    let mut cursor = 0usize;
    let mut put = |byte: u8, samples: &mut [u8]| {
        for bit in (0..8).rev() {
            let b = (byte >> bit) & 1;
            samples[cursor] = (samples[cursor] & 0xFE) | b;
            cursor += 1;
        }
    };
    for &b in &STEGO_MAGIC {
        put(b, &mut samples);
    }
    for &b in &(payload.len() as u32).to_be_bytes() {
        put(b, &mut samples);
    }
    for &b in payload {
        put(b, &mut samples);
    }
    Ok(GrayImage::new(cover.width(), cover.height(), samples).expect("dimensions unchanged"))
}

/// Read the header from the sample LSBs, validate the magic, and return the
/// declared number of payload bytes.
pub fn extract_lsb(stego: &GrayImage) -> Result<Vec<u8>, StegoError> {
    let capacity_bits = capacity(stego);
    if capacity_bits < HEADER_BITS {
        return Err(StegoError::NoMagic);
    }
    let samples = stego.data();
    let read_byte = |index: usize| -> u8 {
        let mut b = 0u8;
        for i in 0..8 {
            b = (b << 1) | (samples[index * 8 + i] & 1);
        }
        b
    };
    for (i, &m) in STEGO_MAGIC.iter().enumerate() {
        if read_byte(i) != m {
            return Err(StegoError::NoMagic);
        }
    }
    let declared_bytes =
        u32::from_be_bytes([read_byte(4), read_byte(5), read_byte(6), read_byte(7)]) as u64;
    if HEADER_BITS + 8 * declared_bytes > capacity_bits {
        return Err(StegoError::TruncatedPayload { declared_bytes, capacity_bits });
    }
    Ok((0..declared_bytes as usize).map(|i| read_byte(8 + i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacities() {
        assert_eq!(capacity(&GrayImage::filled(64, 64, 0)), 4096);
        assert_eq!(capacity(&GrayImage::filled(1, 1, 0)), 1);
        assert_eq!(capacity_for_samples(100 * 100 * 3), 30000);
    }

    #[test]
    fn lsb_set_and_clear() {
        // Embedding flips samples by at most the LSB: 200 carrying a 1-bit
        // becomes 201, 201 carrying a 0-bit becomes 200.
        let cover = GrayImage::filled(16, 16, 200);
        let stego = embed_lsb(&cover, &[0b10101010]).unwrap();
        // First payload bit lands at sample 64.
        assert_eq!(stego.data()[64], 201);
        assert_eq!(stego.data()[65], 200);
        let cover2 = GrayImage::filled(16, 16, 201);
        let stego2 = embed_lsb(&cover2, &[0b01010101]).unwrap();
        assert_eq!(stego2.data()[64], 200);
        assert_eq!(stego2.data()[65], 201);
    }

    #[test]
    fn roundtrip_byte_exact() {
        let cover = GrayImage::from_fn(64, 64, |x, y| ((x * 7 + y * 13) % 256) as u8);
        let payload: Vec<u8> = (0..321).map(|i| (i * 31 % 256) as u8).collect();
        let stego = embed_lsb(&cover, &payload).unwrap();
        assert_eq!(extract_lsb(&stego).unwrap(), payload);
        for (c, s) in cover.data().iter().zip(stego.data()) {
            assert!((*c as i16 - *s as i16).abs() <= 1);
        }
        // Samples past the header + payload region are untouched.
        let written = (HEADER_BITS as usize) + 8 * payload.len();
        assert_eq!(&cover.data()[written..], &stego.data()[written..]);
    }

    #[test]
    fn empty_payload_roundtrip() {
        let cover = GrayImage::filled(3, 3, 10);
        assert!(embed_lsb(&cover, &[]).is_err(), "9 bits cannot hold the header");
        let cover = GrayImage::filled(8, 8, 10);
        let stego = embed_lsb(&cover, &[]).unwrap();
        assert_eq!(extract_lsb(&stego).unwrap(), Vec::<u8>::new());
    }

    #[test]
    fn capacity_boundary() {
        // 64x64 = 4096 bits; header takes 64, leaving exactly 504 bytes.
        let cover = GrayImage::filled(64, 64, 42);
        let max = vec![0xA5u8; 504];
        let stego = embed_lsb(&cover, &max).unwrap();
        assert_eq!(extract_lsb(&stego).unwrap(), max);
        let over = vec![0xA5u8; 505];
        assert!(matches!(
            embed_lsb(&cover, &over),
            Err(StegoError::PayloadTooLarge { required_bits: 4104, available_bits: 4096 })
        ));
    }

    #[test]
    fn pristine_cover_has_no_magic() {
        // All-even samples read as zero bits, which is not the magic.
        let cover = GrayImage::filled(32, 32, 128);
        assert!(matches!(extract_lsb(&cover), Err(StegoError::NoMagic)));
    }

    #[test]
    fn truncated_declared_length() {
        // Hand-craft a header declaring more bytes than the image holds.
        let mut samples = vec![0u8; 16 * 16];
        let mut cursor = 0;
        for &b in STEGO_MAGIC.iter().chain(&(10_000u32).to_be_bytes()) {
            for bit in (0..8).rev() {
                samples[cursor] = (b >> bit) & 1;
                cursor += 1;
            }
        }
        let img = GrayImage::new(16, 16, samples).unwrap();
        assert!(matches!(
            extract_lsb(&img),
            Err(StegoError::TruncatedPayload { declared_bytes: 10_000, .. })
        ));
    }

    #[test]
    fn re_embedding_same_payload_changes_nothing() {
        let cover = GrayImage::from_fn(32, 32, |x, y| ((x * 3 + y * 5) % 251) as u8);
        let payload = b"the very same payload".to_vec();
        let once = embed_lsb(&cover, &payload).unwrap();
        let twice = embed_lsb(&once, &payload).unwrap();
        assert_eq!(once, twice);
    }
}
