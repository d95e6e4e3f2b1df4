#ifndef INTERPEVAL_NET_HPP_
#define INTERPEVAL_NET_HPP_

// Single include point for cpp-httplib so every translation unit agrees on
// the TLS switch. Keep this out of public headers; it is heavy to compile.

#ifdef INTERPEVAL_HAVE_OPENSSL
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#endif

#include <httplib.h>

#endif  // INTERPEVAL_NET_HPP_
