#pragma once

#include <iosfwd>
#include <string>

#include "freemoments/ensemble.hpp"
#include "freemoments/geometry.hpp"
#include "freemoments/inequalities.hpp"
#include "freemoments/moments.hpp"
#include "freemoments/wavefunction.hpp"

namespace fm {

// Shortest round-trip decimal form of a double (deterministic across runs).
std::string format_double(double v);

// JSON object {"order":n,"values":[...],"mass":m,"hbar":h}.
std::string to_json(const MomentVector& y);
MomentVector moment_vector_from_json(const std::string& text);

// JSON object {"order":n,"z":[...],"t0":v,"yn":v}. mass/hbar are not part of
// the serialized form; parsing fills them with 1.
std::string to_json(const InvariantSet& zset);
InvariantSet invariant_set_from_json(const std::string& text);

// JSON object {"order":n,"case":"...","u0":v-or-null,
//              "critical_points":[{"u":v,"kind":"...","value":v}],
//              "boundary":bool}.
std::string to_json(const GeometryReport& report);

// One JSON row per evaluated inequality.
std::string to_json(const InequalityReport& report);

// Wavefunction CSV: comment header recording the grid descriptor, then
// "x,re_psi,im_psi" rows. Reading recovers x_min/dx from the x column and
// checks the spacing is uniform.
void write_wavefunction_csv(std::ostream& out, const GridWavefunction& psi);
GridWavefunction read_wavefunction_csv(std::istream& in);

// Binary wavefunction: magic "FMWF1\n", then count/x_min/dx/hbar/mass,
// then interleaved re,im doubles (native endianness).
void write_wavefunction_binary(std::ostream& out, const GridWavefunction& psi);
GridWavefunction read_wavefunction_binary(std::istream& in);

// Ensemble CSV with an "x,p" header.
void write_ensemble_csv(std::ostream& out, const ParticleEnsemble& e);
ParticleEnsemble read_ensemble_csv(std::istream& in, double mass = 1.0);

}  // namespace fm
