#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "aoa/dataset.hpp"
#include "aoa/errors.hpp"

using namespace aoa;

namespace {

const std::string kFixture = std::string(AOA_FIXTURE_DIR) + "/table1.csv";

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const RmseRecord& record_for(const DatasetEvaluation& ev, const std::string& method, std::size_t n = 0)
{
    for (const auto& r : ev.records) {
        if (r.method == method && (n == 0 || r.n == n)) {
            return r;
        }
    }
    throw std::runtime_error("no record for " + method);
}

}  // namespace

TEST(Coordinates, FixtureContents)
{
    const auto ds = ingest_dataset(kFixture);
    EXPECT_EQ(ds.sites().size(), 14u);
    EXPECT_EQ(ds.receivers().size(), 4u);
    EXPECT_EQ(ds.reference_points().size(), 10u);

    const Site* rec1 = ds.find("Rec1");
    ASSERT_NE(rec1, nullptr);
    EXPECT_EQ(rec1->role, SiteRole::receiver);
    EXPECT_EQ(rec1->position, Point3(1.99, -1.20, 4.65));

    const Site* rp4 = ds.find("RP4");
    ASSERT_NE(rp4, nullptr);
    EXPECT_EQ(rp4->role, SiteRole::reference_point);
    EXPECT_EQ(rp4->position, Point3(2.76, -0.11, 0.0));
}

TEST(Coordinates, LiteralRows)
{
    std::istringstream in("id,x,y,z\nRec1,1.99,-1.20,4.65\nRP4,2.76,-0.11,0\n");
    RealDataset ds;
    read_coordinates(in, "inline", ds);
    EXPECT_EQ(ds.find("Rec1")->position, Point3(1.99, -1.2, 4.65));
    EXPECT_EQ(ds.find("RP4")->position, Point3(2.76, -0.11, 0));
}

TEST(Coordinates, FixtureRoundTripIsByteExact)
{
    std::ostringstream out;
    write_coordinates(out, ingest_dataset(kFixture));
    EXPECT_EQ(out.str(), read_file(kFixture));
}

TEST(Coordinates, ModifiedPositionIsReformatted)
{
    std::istringstream in("id,x,y,z\nRec1,1.50,2,3\n");
    RealDataset ds;
    read_coordinates(in, "inline", ds);
    RealDataset moved;
    Site s = ds.sites()[0];
    s.position.x() = 0.25;
    moved.add_site(s);
    std::ostringstream out;
    write_coordinates(out, moved);
    EXPECT_EQ(out.str(), "id,x,y,z\nRec1,0.25,2,3\n");
}

TEST(Coordinates, ParseErrors)
{
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        RealDataset ds;
        read_coordinates(in, "inline", ds);
    };
    EXPECT_THROW(parse("id,x,y\nRec1,1,2\n"), ParseError);
    EXPECT_THROW(parse("id,x,y,z\nRec1,1,2\n"), ParseError);
    EXPECT_THROW(parse("id,x,y,z\nRec1,1,two,3\n"), ParseError);
    EXPECT_THROW(parse("id,x,y,z\nRec1,1,2,3\nRec1,4,5,6\n"), ParseError);
    try {
        parse("id,x,y,z\nRec1,1,2,3\n\nRec2,1,x,3\n");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(Observations, NormChecks)
{
    RealDataset ds = ingest_dataset(kFixture);
    std::istringstream good("receiver_id,rp_id,pulse,ux,uy,uz\nRec1,RP1,0,0.6,0,0.8000000001\n");
    read_observations(good, "obs", ds);
    ASSERT_EQ(ds.observations().size(), 1u);
    EXPECT_NEAR(ds.observations()[0].dvoa.vector().norm(), 1.0, 1e-15);

    std::istringstream bad("receiver_id,rp_id,pulse,ux,uy,uz\nRec1,RP1,0,0.6,0,0.8\nRec2,RP1,0,0.5,0,0\n");
    try {
        read_observations(bad, "obs", ds);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(Observations, UnknownOrMisroledIds)
{
    RealDataset ds = ingest_dataset(kFixture);
    std::istringstream unknown("receiver_id,rp_id,pulse,ux,uy,uz\nRec9,RP1,0,1,0,0\n");
    EXPECT_THROW(read_observations(unknown, "obs", ds), ParseError);
    std::istringstream swapped("receiver_id,rp_id,pulse,ux,uy,uz\nRP1,Rec1,0,1,0,0\n");
    EXPECT_THROW(read_observations(swapped, "obs", ds), ParseError);
}

TEST(Observations, WriteReadRoundTrip)
{
    SynthesisOptions opt;
    opt.pulses = 3;
    const auto ds = synthesize_dataset(ingest_dataset(kFixture), opt);
    EXPECT_EQ(ds.observations().size(), 3u * 10u * 4u);
    std::ostringstream out;
    write_observations(out, ds);
    RealDataset again = ingest_dataset(kFixture);
    std::istringstream in(out.str());
    read_observations(in, "obs", again);
    ASSERT_EQ(again.observations().size(), ds.observations().size());
    for (std::size_t i = 0; i < ds.observations().size(); ++i) {
        EXPECT_EQ(again.observations()[i].dvoa.vector(), ds.observations()[i].dvoa.vector());
    }
}

TEST(EvaluateDataset, NoiselessSyntheticData)
{
    SynthesisOptions syn;
    syn.pulses = 5;
    syn.sigma_deg = 1e-12;
    const auto ds = synthesize_dataset(ingest_dataset(kFixture), syn);
    EvaluationOptions opt;
    opt.alg1_n = {2, 3, 4};
    const auto ev = evaluate_dataset(ds, opt);
    EXPECT_EQ(ev.pulses, 50u);
    EXPECT_EQ(ev.skipped_pulses, 0u);
    for (const auto& r : ev.records) {
        EXPECT_EQ(r.failures, 0u) << r.method;
        EXPECT_TRUE(std::isnan(r.p));
        if (r.method == "alg2") {
            EXPECT_LT(r.rmse, 0.5);
        } else {
            EXPECT_LT(r.rmse, 1e-3) << r.method << " n=" << r.n;
        }
    }
}

TEST(EvaluateDataset, SingleNlosReceiverIsDiscarded)
{
    SynthesisOptions syn;
    syn.pulses = 100;
    syn.nlos_receivers = {"Rec3"};
    syn.p_nlos = 0.9;
    syn.seed = 3;
    const auto ds = synthesize_dataset(ingest_dataset(kFixture), syn);
    EvaluationOptions opt;
    opt.methods = {Method::alg1, Method::lls, Method::wlls};
    const auto ev = evaluate_dataset(ds, opt);
    const double alg1 = record_for(ev, "alg1", 3).rmse;
    EXPECT_LT(alg1, record_for(ev, "lls").rmse);
    EXPECT_LT(alg1, record_for(ev, "wlls").rmse);
}

TEST(EvaluateDataset, SkipsUndersizedPulses)
{
    RealDataset ds = ingest_dataset(kFixture);
    std::istringstream in("receiver_id,rp_id,pulse,ux,uy,uz\nRec1,RP1,0,0,0,-1\n");
    read_observations(in, "obs", ds);
    EvaluationOptions opt;
    opt.methods = {Method::lls};
    const auto ev = evaluate_dataset(ds, opt);
    EXPECT_EQ(ev.pulses, 1u);
    EXPECT_EQ(ev.skipped_pulses, 1u);
}
