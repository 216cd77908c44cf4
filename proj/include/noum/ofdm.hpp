#pragma once

#include <array>
#include <span>
#include <vector>

#include "noum/mcs.hpp"
#include "noum/types.hpp"

namespace noum::waveform {

/// Unitary in-place FFT/IFFT (1/sqrt(N) both directions); N a power of two.
void fft_unitary(std::span<cplx> x, bool inverse);

/// Fixed BPSK pilot pattern on the 4 pilot subcarriers.
std::array<cplx, 4> default_pilots();

/// FFT bin numbers of the data subcarriers, in assembly order.
std::vector<int> data_subcarrier_bins(const FrameConfig& frame);

/// FFT bin numbers of the pilot subcarriers.
std::vector<int> pilot_subcarrier_bins(const FrameConfig& frame);

/// Maps data + pilots onto the subcarrier grid, nulls the guards, IFFTs each
/// symbol and prepends the cyclic prefix. |data_syms| must equal
/// n_data * payload_symbols; output has (n_fft + cp_len) * payload_symbols
/// samples.
std::vector<cplx> ofdm_assemble(std::span<const cplx> data_syms, const FrameConfig& frame,
                                const std::array<cplx, 4>& pilot_seq);

/// Inverse of ofdm_assemble: strips the CP, FFTs, returns the data-subcarrier
/// symbols in assembly order.
std::vector<cplx> ofdm_extract(std::span<const cplx> samples, const FrameConfig& frame);

struct OfdmCells {
  std::vector<cplx> data;                 // n_data * payload_symbols
  std::vector<std::vector<cplx>> pilots;  // [payload_symbols][n_pilot]
};

/// Extraction variant that also returns the received pilot cells, for
/// pilot-based channel estimation.
OfdmCells ofdm_extract_cells(std::span<const cplx> samples, const FrameConfig& frame);

}  // namespace noum::waveform
