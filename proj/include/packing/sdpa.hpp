#pragma once

// SDPA sparse format (.dat-s) import/export.
//
// The file encodes   max tr(F0 Y)  s.t.  tr(Fi Y) = c_i,  Y >= 0,
// which matches our   min <C, X>   s.t.  <Ai, X> = b_i    with F0 = -C,
// Fi = Ai and c = b.  Entries are written with enough decimal digits that
// reading them back at the same precision reproduces every coefficient bit
// for bit, so export followed by import is the identity on problem data.

#include <string>

#include "packing/sosmodel.hpp"

namespace packing {

void export_sdpa(const SdpProblem<MpReal>& prob, const std::string& path);

SdpProblem<MpReal> import_sdpa(const std::string& path, Prec precision);

}  // namespace packing
