#pragma once

#include <complex>
#include <cstdlib>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace abelquad {

using cplx = std::complex<double>;

constexpr int kInvalid = -1;
constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

class MeshError : public Error {
public:
    using Error::Error;
};

/// A face with degree other than 3 or 4 was encountered.
class UnsupportedFaceDegree : public MeshError {
public:
    using MeshError::MeshError;
};

class NonManifoldError : public MeshError {
public:
    using MeshError::MeshError;
};

class OrientationError : public MeshError {
public:
    using MeshError::MeshError;
};

class EmptyMeshError : public MeshError {
public:
    using MeshError::MeshError;
};

class OpenMeshError : public MeshError {
public:
    using MeshError::MeshError;
};

/// Input homology generators whose intersection form cannot be brought to
/// the standard symplectic form by a unimodular change of basis.
class NonUnimodular : public Error {
public:
    using Error::Error;
};

class SliceError : public Error {
public:
    using Error::Error;
};

class SolveError : public Error {
public:
    using Error::Error;
};

/// A 1-form vanishes on an edge, so the winding index at its endpoints is
/// undefined.
class ZeroOnEdge : public Error {
public:
    using Error::Error;
};

/// Imaginary parts of the b-periods are singular as a real matrix.
class DegeneratePeriodLattice : public Error {
public:
    using Error::Error;
};

/// Branch of the 4th root could not be propagated consistently across a
/// non-cut edge.
class BranchTear : public Error {
public:
    using Error::Error;
};

class SnapError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Logging (level from ABELQUAD_LOG: debug|info|warn|error|quiet)
// ---------------------------------------------------------------------------

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Err = 3, Quiet = 4 };

inline LogLevel log_level()
{
    static LogLevel lvl = [] {
        const char* env = std::getenv("ABELQUAD_LOG");
        if (!env) return LogLevel::Warn;
        std::string s(env);
        if (s == "debug") return LogLevel::Debug;
        if (s == "info") return LogLevel::Info;
        if (s == "warn") return LogLevel::Warn;
        if (s == "error") return LogLevel::Err;
        if (s == "quiet") return LogLevel::Quiet;
        return LogLevel::Warn;
    }();
    return lvl;
}

inline void log(LogLevel lvl, const std::string& msg)
{
    static const char* names[] = {"debug", "info", "warn", "error"};
    if (lvl >= log_level() && lvl != LogLevel::Quiet) {
        std::fprintf(stderr, "[abelquad:%s] %s\n",
                     names[static_cast<int>(lvl)], msg.c_str());
    }
}

// ---------------------------------------------------------------------------
// Misc numeric helpers
// ---------------------------------------------------------------------------

/// Round to 12 significant digits. Reports are serialized with values passed
/// through this so identical runs produce byte-identical JSON.
inline double round_sig(double x)
{
    if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

/// Signed angle of b relative to a, in (-pi, pi].
inline double delta_arg(const cplx& a, const cplx& b)
{
    double d = std::arg(b) - std::arg(a);
    while (d <= -kPi) d += 2.0 * kPi;
    while (d > kPi) d -= 2.0 * kPi;
    return d;
}

} // namespace abelquad
