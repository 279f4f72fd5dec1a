//! Lexicographically-ordered constrained codes for TDMR track groups.

pub mod codec;
pub mod enumeration;
pub mod framing;
pub mod galois;
pub mod grid;
pub mod oploco;
pub mod otloco;
pub mod patterns;
pub mod rank_oracle;
pub mod spectral;
pub mod stloco;
pub mod tdmr_sim;

pub use codec::{codec, CodecError, ConstrainedCodec};
pub use enumeration::{CardinalityTable, CodeKind, Rates, Ratio};
pub use framing::{DecodedFrame, FrameInput, FrameOutcome, FramingError, OutcomeCounts, Stream, StreamCodec};
pub use galois::{Field, Symbol, SymbolError};
pub use grid::{BitGrid, Grid, GridError};
pub use oploco::OpCodec;
pub use otloco::OtCodec;
pub use patterns::{BuiltinSet, GridClass, Neighborhood, Occurrence, PatternError, PatternSet};
pub use rank_oracle::{CountingDfa, RankError};
pub use spectral::{build_fstd, capacity, dominant_eigenvalue, Capacity, Fstd, SpectralError};
pub use stloco::{StCodec, TrackTriple};
pub use tdmr_sim::{
    ChannelParams, ErrorProfile, ScheduleEntry, SimCode, SimConfig, SimError, Surrogate, SweepKind, SweepPoint,
    SweepResult, SweepRow,
};
