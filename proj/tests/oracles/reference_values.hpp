// Generated by gen_reference.py (mpmath). Do not edit.
#pragma once

namespace fsde::testing {

struct GammaRef { double x; double value; };
struct MlRef { double beta; double z; double value; };

inline constexpr GammaRef kGammaRef[] = {
    {0.01, 99.432585119150601632},
    {0.1, 9.5135076986687312858},
    {0.25, 3.6256099082219083119},
    {0.5, 1.7724538509055160273},
    {0.75, 1.2254167024651776451},
    {1.0, 1.0},
    {1.5, 0.88622692545275801365},
    {2.5, 1.3293403881791370205},
    {3.3, 2.6834373819557683003},
    {7.7, 2769.830362327314632},
    {10.0, 362880.0},
    {20.5, 540624298233507504.47},
    {33.3, 7.4875775965226323274e+35},
    {49.9, 4.1180110342530352191e+62},
    {50.0, 6.0828186403426756087e+62},
};

inline constexpr MlRef kMlRef[] = {
    {0.2, -3.0, 0.2258545451264880949},
    {0.2, -1.0, 0.47110068893348294766},
    {0.2, -0.25, 0.78407177311325881455},
    {0.2, 0.1, 1.1214205849209902451},
    {0.2, 0.7, 3.3945321326797088024},
    {0.2, 1.0, 11.823049531212143632},
    {0.2, 2.5, 1.289853845238489973e+43},
    {0.25, -3.0, 0.21900442756040679925},
    {0.25, -1.0, 0.46385276080171328694},
    {0.25, -0.25, 0.78090342282538168414},
    {0.25, 0.1, 1.1228077680091176233},
    {0.25, 0.7, 3.2887737097586668308},
    {0.25, 1.0, 9.5541074007228536457},
    {0.25, 2.5, 368712779720787051.47},
    {0.25, 5.0, 1.0867037878654946774e+272},
    {0.5, -20.0, 0.028174348741051319319},
    {0.5, -10.0, 0.056140992743822585858},
    {0.5, -5.0, 0.11070463773306862637},
    {0.5, -3.0, 0.17900115118138995042},
    {0.5, -1.0, 0.42758357615580700441},
    {0.5, -0.25, 0.77034654773099674392},
    {0.5, 0.1, 1.1236433541992094807},
    {0.5, 0.7, 2.7387021025613167788},
    {0.5, 1.0, 5.0089800807622834663},
    {0.5, 2.5, 1035.8148429726229083},
    {0.5, 5.0, 144009798674.66104041},
    {0.5, 10.0, 5.3762342836322708968e+43},
    {0.5, 20.0, 1.0442939379528287901e+174},
    {0.6, -30.0, 0.015211431482801457494},
    {0.6, -20.0, 0.022946564273258376396},
    {0.6, -10.0, 0.046589654426804280962},
    {0.6, -5.0, 0.095117846438754620348},
    {0.6, -3.0, 0.15970348026509122069},
    {0.6, -1.0, 0.41332734094310630052},
    {0.6, -0.25, 0.76877549490059906131},
    {0.6, 0.1, 1.1216253043460310137},
    {0.6, 0.7, 2.553502843481012883},
    {0.6, 1.0, 4.2486350026483744806},
    {0.6, 2.5, 166.49571691056940152},
    {0.6, 5.0, 3726255.100230058277},
    {0.6, 10.0, 2.398904320564645321e+20},
    {0.6, 20.0, 1.6597045718458285419e+64},
    {0.8, -50.0, 0.0044677761579029922645},
    {0.8, -30.0, 0.0075758607992192086547},
    {0.8, -20.0, 0.011617250451432777958},
    {0.8, -10.0, 0.024902819761976532186},
    {0.8, -5.0, 0.057595384762152244264},
    {0.8, -3.0, 0.1129201986822173868},
    {0.8, -1.0, 0.38694857861897684617},
    {0.8, -0.25, 0.77052437758847089859},
    {0.8, 0.1, 1.1147107262785006463},
    {0.8, 0.7, 2.2489846614912477878},
    {0.8, 1.0, 3.2945692348790183961},
    {0.8, 2.5, 28.924178020934890457},
    {0.8, 5.0, 2208.0643575864449017},
    {0.8, 10.0, 66050994.884095806107},
    {0.8, 20.0, 2919646113836312225.7},
    {0.8, 50.0, 6.9115275310198968171e+57},
    {0.9, -50.0, 0.0021753530768569760498},
    {0.9, -30.0, 0.003713707698459852111},
    {0.9, -20.0, 0.0057495078161091125836},
    {0.9, -10.0, 0.012820606051102099938},
    {0.9, -5.0, 0.034431324804098418323},
    {0.9, -3.0, 0.083888354033773262067},
    {0.9, -1.0, 0.37606602142464187902},
    {0.9, -0.25, 0.77386953164960228531},
    {0.9, 0.1, 1.1101876929265492298},
    {0.9, 0.7, 2.1240621309182167147},
    {0.9, 1.0, 2.9749390749704473833},
    {0.9, 2.5, 17.66851594965390443},
    {0.9, 5.0, 438.95181466448263359},
    {0.9, 10.0, 451737.77456773740187},
    {0.9, 20.0, 1452600326526.7387095},
    {0.9, 50.0, 3.8292068545927228506e+33},
    {0.95, -50.0, 0.0010672340392208429699},
    {0.95, -30.0, 0.0018277746789235517628},
    {0.95, -20.0, 0.0028432225780766325644},
    {0.95, -10.0, 0.0065071353122560632181},
    {0.95, -5.0, 0.02126843729173112133},
    {0.95, -3.0, 0.06753202221407190526},
    {0.95, -1.0, 0.37157362003067881398},
    {0.95, -0.25, 0.77614254356978774788},
    {0.95, 0.1, 1.1077319426785128728},
    {0.95, 0.7, 2.0672305912105880521},
    {0.95, 1.0, 2.8399807736949947271},
    {0.95, 2.5, 14.496949053717682341},
    {0.95, 5.0, 243.04667913230733865},
    {0.95, 10.0, 84092.457677021251204},
    {0.95, 20.0, 15543238670.74961876},
    {0.95, 50.0, 5.029641334074197321e+26},
};

}  // namespace fsde::testing
