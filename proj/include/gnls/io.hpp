#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "gnls/branch.hpp"
#include "gnls/envelope.hpp"
#include "gnls/evolution.hpp"
#include "gnls/kdv.hpp"
#include "gnls/nonlinearity.hpp"

namespace gnls::io {

/// Shortest round-trip decimal rendering of a double (std::to_chars), so CSV
/// bytes are reproducible and loss-free.
std::string format_double(double v);

Nonlinearity load_nonlinearity(const std::filesystem::path& json_path);
Nonlinearity nonlinearity_from_json(const nlohmann::json& j);
nlohmann::json nonlinearity_to_json(const Nonlinearity& nl);

nlohmann::json to_json(const HypothesisReport& rep);
nlohmann::json to_json(const StructuralConstants& sc);
nlohmann::json to_json(const AsymptoteFit& fit);
nlohmann::json to_json(const CurveCertification& cert);
nlohmann::json to_json(const KdvReport& rep);
nlohmann::json to_json(const AppendixAudit& audit);

std::string branch_csv(const Branch& br);                 // c,xi_c,E,p,dE_dc,dp_dc,flags
std::string profile_csv(const SolitonProfile& prof);      // x,eta,phi,re_v,im_v
std::string min_curve_csv(const MinCurve& curve);         // q,Emin,source,delta_p
std::string ledger_csv(const std::vector<LedgerRow>& rows);  // t,E,p,p_untwisted,min_mod,center

/// Minimal static polyline plot of the (p, E) diagram: branch points, the
/// kink-energy line, optional asymptote and the tangent intersection marker.
std::string diagram_svg(const Branch& br, const MinCurve& curve,
                        const AsymptoteFit* fit /* nullable */);

/// FNV-1a 64-bit over a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// Run manifest: command, inputs, flat parameter map, and the emitted files
/// with content hashes. Re-running the same manifest reproduces the bytes.
class Manifest {
public:
    Manifest(std::string command, const Nonlinearity& nl);
    void set_param(const std::string& key, const std::string& value);
    void set_param(const std::string& key, double value);
    void set_param(const std::string& key, long value);
    /// writes the file and records (path, fnv1a64) in the manifest
    void write_output(const std::filesystem::path& path, const std::string& bytes);
    nlohmann::json json() const;
    void save(const std::filesystem::path& path) const;

private:
    struct Data;
    std::shared_ptr<Data> d_;
};

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace gnls::io
