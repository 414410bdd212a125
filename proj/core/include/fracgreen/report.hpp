#pragma once

#include <ostream>

#include "fracgreen/verify.hpp"

namespace fracgreen {

// CSV columns, in order:
// identity_id,preset,a,delta,mu,N,box,lhs_re,lhs_im,rhs_re,rhs_im,abs_residual,rel_residual
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const IdentityReport& r);

// One JSON object per line, same content plus dim and convergence_order.
void write_jsonl_row(std::ostream& os, const IdentityReport& r);

}  // namespace fracgreen
