#pragma once

#include "entcorr/detci.hpp"
#include "entcorr/entanglement.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace entcorr {

struct FcidumpMetadata {
  int norb = 0;
  int nelec = 0;
  int ms2 = 0;
  std::vector<int> orbsym;
  int isym = 1;
};

struct Fcidump {
  MOIntegrals integrals;
  FcidumpMetadata meta;
};

// Namelist header (&FCI ... &END or /) followed by "value i j k l" records,
// 1-based, chemists' notation; "i j 0 0" one-electron, "0 0 0 0" core.
// "i 0 0 0" orbital-energy records are accepted and ignored.
Fcidump parse_fcidump(std::string_view text);
Fcidump read_fcidump(const std::string& path);

// Restricted integral sets only. Unique elements under 8-fold symmetry are
// written with 17 significant digits; exact zeros are omitted.
std::string format_fcidump(const MOIntegrals& mo, const FcidumpMetadata& meta);
void write_fcidump(const std::string& path, const MOIntegrals& mo, const FcidumpMetadata& meta);

// CI on the aufbau reference of the dump. The reference determinant energy
// is reported in the e_hf_rhf slot.
EntropyReport fcidump_report(const Fcidump& dump, CiMode mode = CiMode::kFci);

}  // namespace entcorr
