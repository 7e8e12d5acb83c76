#ifndef LLINBO_AGENTS_DETAIL_HTTPLIB_HPP
#define LLINBO_AGENTS_DETAIL_HTTPLIB_HPP

#include <httplib.h>

// <resolv.h> defines _res as a macro, which breaks Eigen headers included later.
#ifdef _res
#undef _res
#endif

#endif
