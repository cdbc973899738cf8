#include "entcorr/fcidump.hpp"

#include "entcorr/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace entcorr {

namespace {

constexpr double kConflictTol = 1e-10;

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

using Key = std::array<int, 4>;

Key canonical(int i, int j, int k, int l) {
  if (i < j) std::swap(i, j);
  if (k < l) std::swap(k, l);
  if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) {
    std::swap(i, k);
    std::swap(j, l);
  }
  return {i, j, k, l};
}

int header_int(const std::map<std::string, std::vector<std::string>>& h, const std::string& key) {
  auto it = h.find(key);
  if (it == h.end() || it->second.empty()) throw ParseError("FCIDUMP header is missing " + key, 1);
  try {
    return std::stoi(it->second.front());
  } catch (const std::exception&) {
    throw ParseError("FCIDUMP header value for " + key + " is not an integer", 1);
  }
}

}  // namespace

Fcidump parse_fcidump(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  // Header namelist.
  std::string header;
  std::size_t body_start = 0;
  bool terminated = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string u = upper(trim(lines[i]));
    std::string part = u;
    bool end = false;
    if (auto p = part.find("&END"); p != std::string::npos) {
      part = part.substr(0, p);
      end = true;
    } else if (!part.empty() && part.back() == '/') {
      part.pop_back();
      end = true;
    }
    header += " " + part;
    if (end) {
      body_start = i + 1;
      terminated = true;
      break;
    }
  }
  if (!terminated) throw ParseError("FCIDUMP header is not terminated by &END or /", 1);
  if (auto p = header.find("&FCI"); p != std::string::npos) header.erase(p, 4);
  for (auto& c : header)
    if (c == ',') c = ' ';
  std::string spaced;
  for (char c : header) {
    if (c == '=')
      spaced += " = ";
    else
      spaced += c;
  }
  std::vector<std::string> tokens;
  {
    std::istringstream in(spaced);
    std::string t;
    while (in >> t) tokens.push_back(t);
  }
  std::map<std::string, std::vector<std::string>> fields;
  std::string current;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i + 1 < tokens.size() && tokens[i + 1] == "=") {
      current = tokens[i];
      fields[current];
      ++i;
      continue;
    }
    if (current.empty()) throw ParseError("unexpected token '" + tokens[i] + "' in FCIDUMP header", 1);
    fields[current].push_back(tokens[i]);
  }

  Fcidump dump;
  auto& meta = dump.meta;
  meta.norb = header_int(fields, "NORB");
  meta.nelec = header_int(fields, "NELEC");
  meta.ms2 = header_int(fields, "MS2");
  if (fields.count("ISYM")) meta.isym = header_int(fields, "ISYM");
  if (meta.norb < 1 || static_cast<std::size_t>(meta.norb) > kMaxOrbitals)
    throw ParseError("NORB must be in [1, 32]", 1);
  if (meta.nelec < 1 || std::abs(meta.ms2) > meta.nelec || (meta.nelec + meta.ms2) % 2 != 0)
    throw ParseError("NELEC/MS2 combination is inconsistent", 1);
  if ((meta.nelec + meta.ms2) / 2 > meta.norb || (meta.nelec - meta.ms2) / 2 > meta.norb)
    throw ParseError("more electrons of one spin than orbitals", 1);
  if (auto it = fields.find("ORBSYM"); it != fields.end()) {
    for (const auto& v : it->second) meta.orbsym.push_back(std::stoi(v));
    if (static_cast<int>(meta.orbsym.size()) != meta.norb)
      throw ParseError("ORBSYM lists " + std::to_string(meta.orbsym.size()) + " entries for NORB=" +
                           std::to_string(meta.norb),
                       1);
  } else {
    meta.orbsym.assign(static_cast<std::size_t>(meta.norb), 1);
  }

  const auto n = static_cast<std::size_t>(meta.norb);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(meta.norb, meta.norb);
  Eri4 eri(n);
  double core = 0.0;
  std::map<Key, double> seen;

  for (std::size_t li = body_start; li < lines.size(); ++li) {
    std::string line = trim(lines[li]);
    if (line.empty()) continue;
    for (auto& c : line)
      if (c == 'D' || c == 'd') c = 'E';
    std::istringstream in(line);
    double v;
    int i, j, k, l;
    if (!(in >> v >> i >> j >> k >> l)) throw ParseError("malformed integral record '" + line + "'", li + 1);
    for (int idx : {i, j, k, l})
      if (idx < 0 || idx > meta.norb)
        throw ParseError("index " + std::to_string(idx) + " out of range for NORB=" + std::to_string(meta.norb) +
                             " in record '" + trim(lines[li]) + "'",
                         li + 1);

    Key key;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      key = {0, 0, 0, 0};
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      continue;  // orbital energy
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      key = {std::max(i, j), std::min(i, j), 0, 0};
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      key = canonical(i, j, k, l);
    } else {
      throw ParseError("record '" + trim(lines[li]) + "' has an invalid index pattern", li + 1);
    }
    if (auto it = seen.find(key); it != seen.end()) {
      if (std::abs(it->second - v) > kConflictTol)
        throw ParseError("conflicting duplicate record '" + trim(lines[li]) + "'", li + 1);
      continue;
    }
    seen.emplace(key, v);
    if (key[0] == 0) {
      core = v;
    } else if (key[2] == 0) {
      h(key[0] - 1, key[1] - 1) = v;
      h(key[1] - 1, key[0] - 1) = v;
    } else {
      eri.set_symmetric(static_cast<std::size_t>(key[0] - 1), static_cast<std::size_t>(key[1] - 1),
                        static_cast<std::size_t>(key[2] - 1), static_cast<std::size_t>(key[3] - 1), v);
    }
  }
  dump.integrals = MOIntegrals::restricted_set(std::move(h), std::move(eri), core);
  return dump;
}

Fcidump read_fcidump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open FCIDUMP file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fcidump(ss.str());
}

std::string format_fcidump(const MOIntegrals& mo, const FcidumpMetadata& meta) {
  if (!mo.restricted) throw Unsupported("FCIDUMP output supports restricted integral sets only");
  if (static_cast<std::size_t>(meta.norb) != mo.m) throw InvalidArgument("NORB does not match the integral set");
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "&FCI NORB=%d,NELEC=%d,MS2=%d,\n ORBSYM=", meta.norb, meta.nelec, meta.ms2);
  out += buf;
  for (int i = 0; i < meta.norb; ++i) {
    const int sym = meta.orbsym.empty() ? 1 : meta.orbsym.at(static_cast<std::size_t>(i));
    out += std::to_string(sym) + ",";
  }
  std::snprintf(buf, sizeof buf, "\n ISYM=%d,\n&END\n", meta.isym);
  out += buf;

  auto record = [&](double v, int i, int j, int k, int l) {
    std::snprintf(buf, sizeof buf, "%24.16E %4d %4d %4d %4d\n", v, i, j, k, l);
    out += buf;
  };
  const int n = meta.norb;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = mo.eri_aa(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                     static_cast<std::size_t>(k), static_cast<std::size_t>(l));
          if (v != 0.0) record(v, i + 1, j + 1, k + 1, l + 1);
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (mo.h_alpha(i, j) != 0.0) record(mo.h_alpha(i, j), i + 1, j + 1, 0, 0);
  record(mo.core_energy, 0, 0, 0, 0);
  return out;
}

void write_fcidump(const std::string& path, const MOIntegrals& mo, const FcidumpMetadata& meta) {
  const std::string text = format_fcidump(mo, meta);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write FCIDUMP file '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

EntropyReport fcidump_report(const Fcidump& dump, CiMode mode) {
  const int na = (dump.meta.nelec + dump.meta.ms2) / 2;
  const int nb = (dump.meta.nelec - dump.meta.ms2) / 2;
  const Determinant ref = aufbau_determinant(na, nb);
  const auto dets = enumerate_determinants(dump.integrals.m, na, nb, mode, ref);
  const CIWavefunction wf = solve_ci(dets, dump.integrals, dump.integrals.core_energy, mode);
  const double e_ref = hamiltonian_element(ref, ref, dump.integrals) + dump.integrals.core_energy;
  return make_entropy_report(wf, e_ref, std::nullopt, "FCIDUMP", "FCIDUMP");
}

}  // namespace entcorr
