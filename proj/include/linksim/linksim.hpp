#ifndef LINKSIM_LINKSIM_HPP
#define LINKSIM_LINKSIM_HPP

#include "linksim/channel.hpp"
#include "linksim/config.hpp"
#include "linksim/correlation.hpp"
#include "linksim/metrics.hpp"
#include "linksim/modem.hpp"
#include "linksim/pn_codes.hpp"
#include "linksim/receiver.hpp"
#include "linksim/spreading.hpp"
#include "linksim/sweep.hpp"
#include "linksim/theory.hpp"

#endif  // LINKSIM_LINKSIM_HPP
