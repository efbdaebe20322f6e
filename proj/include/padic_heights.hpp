#pragma once

#include "padic_heights/errors.hpp"
#include "padic_heights/padic.hpp"
#include "padic_heights/series.hpp"
#include "padic_heights/matrix.hpp"
#include "padic_heights/curve.hpp"
#include "padic_heights/frobenius.hpp"
#include "padic_heights/cohomology.hpp"
#include "padic_heights/coleman.hpp"
#include "padic_heights/heights.hpp"
#include "padic_heights/serialize.hpp"
