#pragma once

#include "ternrep/error.hpp"
#include "ternrep/linalg.hpp"
#include "ternrep/forms.hpp"
#include "ternrep/enumerate.hpp"
#include "ternrep/isometry.hpp"
#include "ternrep/congruence.hpp"
#include "ternrep/fixtures.hpp"
#include "ternrep/prover.hpp"
#include "ternrep/certificate.hpp"
