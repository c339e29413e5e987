#pragma once

#include "numtheory.hpp"
#include "pell.hpp"
#include "lorentz.hpp"
#include "revivals.hpp"
#include "wave.hpp"
#include "render.hpp"
