#ifndef MUBTOMO_MUBTOMO_HPP
#define MUBTOMO_MUBTOMO_HPP

#include "mubtomo/error.hpp"
#include "mubtomo/finite_field.hpp"
#include "mubtomo/qudit_mub.hpp"
#include "mubtomo/rng.hpp"
#include "mubtomo/qudit_tomography.hpp"
#include "mubtomo/phase_space.hpp"
#include "mubtomo/classical_radon.hpp"
#include "mubtomo/cv_wigner.hpp"
#include "mubtomo/io.hpp"

#endif
