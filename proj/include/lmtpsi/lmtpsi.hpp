#pragma once

#include "lmtpsi/constants.hpp"
#include "lmtpsi/error.hpp"
#include "lmtpsi/fft.hpp"
#include "lmtpsi/interferometer.hpp"
#include "lmtpsi/quantum_core.hpp"
#include "lmtpsi/raman.hpp"
#include "lmtpsi/sensitivity.hpp"
#include "lmtpsi/signal.hpp"
#include "lmtpsi/version.hpp"
