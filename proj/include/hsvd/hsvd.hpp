#pragma once

#include "hsvd/error.hpp"
#include "hsvd/matrix.hpp"
#include "hsvd/linalg.hpp"
#include "hsvd/signature.hpp"
#include "hsvd/decomposition.hpp"
#include "hsvd/verify.hpp"
