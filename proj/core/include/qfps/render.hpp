#pragma once

#include <string>

#include "qfps/qde.hpp"
#include "qfps/qre.hpp"
#include "qfps/rep.hpp"
#include "qfps/series.hpp"

namespace qfps {

// Truncated series as a polynomial, highest exponent first,
// e.g. "61/720*z^6 + 5/24*z^4 + 1/2*z^2 + 1".
std::string to_string(const TruncSeries& s);

std::string to_json(const QDE& q);
std::string to_json(const QRE& r);
std::string to_json(const SeriesRep& rep);
std::string to_json(const TruncSeries& s);
std::string to_json(const Verdict& v);

std::string to_latex(const QDE& q);
std::string to_latex(const QRE& r);
std::string to_latex(const SeriesRep& rep);
std::string to_latex(const TruncSeries& s);
std::string to_latex(const Verdict& v);

}  // namespace qfps
