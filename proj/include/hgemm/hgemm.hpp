#pragma once

#include "hgemm/blocking.hpp"
#include "hgemm/compare.hpp"
#include "hgemm/complex_gemm.hpp"
#include "hgemm/error.hpp"
#include "hgemm/gemm_opt.hpp"
#include "hgemm/gemm_ref.hpp"
#include "hgemm/matrix.hpp"
#include "hgemm/microkernel.hpp"
#include "hgemm/pack.hpp"
#include "hgemm/quaternion.hpp"
#include "hgemm/tuner.hpp"
