//! Stimuli, representation matrices, neural volumes and their on-disk forms.

pub mod io;
pub mod manifest;
pub mod matrix;
pub mod sampling;
pub mod volume;

pub use io::{import_csv, read_matrix, write_matrix};
pub use manifest::{GroupsFile, Stimulus, StimulusKind, StimulusManifest, SubjectGroup};
pub use matrix::{Matrix, MatrixSource, RepresentationMatrix};
pub use sampling::{sample_voxel_indices, sample_voxels, valid_voxel_mask, SamplingConfig};
pub use volume::{flatten_volume, linear_index, unflatten_index, NeuralVolume};
