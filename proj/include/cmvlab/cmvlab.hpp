#pragma once

#include "cmvlab/approximation.hpp"
#include "cmvlab/coefficients.hpp"
#include "cmvlab/config.hpp"
#include "cmvlab/core.hpp"
#include "cmvlab/floquet.hpp"
#include "cmvlab/io.hpp"
#include "cmvlab/operator.hpp"
#include "cmvlab/qwalk.hpp"
#include "cmvlab/spectral_sets.hpp"
#include "cmvlab/transfer.hpp"
#include "cmvlab/weyl.hpp"
