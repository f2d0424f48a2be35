//! Prefix codes and universal lossless coding schemes on indexed diagrams.

mod code;
mod construct;
mod huffman;
mod sequential;
mod universal;

pub use code::{bits_from_str, bits_to_int, bits_to_string, int_to_bits, Bits, Dyadic, PrefixCode};
pub use construct::{
    canonical_code, combine, decode_combined, header_width, lift, lift_n, mean_length, rate, redundancy,
    root_complement,
};
pub use huffman::{huffman, huffman_lengths, DEFAULT_SMOOTHING};
pub use sequential::{binary_blocks, SequentialScheme};
pub use universal::{
    complete_length_vectors, encoder_enumeration, lift_to, rate_trace, EncoderArray, RateRow, DEFAULT_LEVEL_CAP,
};
